"""Regions of transition systems: supports, signatures, and their checks.

A region assigns every state a bit (the support) and every event an
interaction (the signature) so that each arc ``s --e--> s'`` satisfies
``signature(e)(support(s)) == support(s')``. Regions are the witnesses for
both kinds of separation question and become the places of synthesized nets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Mapping, Optional

from .interactions import Interaction, NetType, iter_type
from .ts import Report, Subject, TransitionSystem, TsUnion, Violation


class RegionDomainError(ValueError):
    """The support/signature domains do not match the transition system."""


@dataclass(frozen=True, eq=True)
class Region:
    """A support (state -> bit) plus a signature (event -> interaction)."""

    support: Mapping[str, int]
    signature: Mapping[str, Interaction]

    def separates(self, first: str, second: str) -> bool:
        """True if the two states get different support bits."""
        return self.support[first] != self.support[second]

    def inhibits(self, event: str, state: str) -> bool:
        """True if the event's interaction is undefined at the state's bit."""
        return self.signature[event].apply(self.support[state]) is None

    def support_set(self) -> frozenset[str]:
        return frozenset(s for s, bit in self.support.items() if bit)

    def key(self) -> tuple[tuple[str, int], ...]:
        """Hashable identity used for deduplication (support + signature)."""
        sup = tuple(sorted(self.support.items()))
        sig = tuple(sorted((e, i.value) for e, i in self.signature.items()))
        return sup + sig


class Family(enum.Enum):
    """The two families of net types targeted by the hardness generator.

    ``FREE`` is the single type {nop, set, swap, free}; ``USED`` is the four
    supersets of {nop, set, swap, used} inside {nop, set, swap, used, res,
    free}. Every family member contains nop, set and swap; they differ in
    which partial interactions are available for inhibition.
    """

    FREE = "free"
    USED = "used"

    @property
    def base_type(self) -> NetType:
        if self is Family.FREE:
            return NetType.of(
                Interaction.NOP, Interaction.SET, Interaction.SWAP, Interaction.FREE
            )
        return NetType.of(
            Interaction.NOP, Interaction.SET, Interaction.SWAP, Interaction.USED
        )

    def types(self) -> tuple[NetType, ...]:
        """All member types of the family, in a fixed order."""
        if self is Family.FREE:
            return (self.base_type,)
        base = self.base_type.interactions
        extras = (
            frozenset(),
            frozenset({Interaction.RES}),
            frozenset({Interaction.FREE}),
            frozenset({Interaction.RES, Interaction.FREE}),
        )
        return tuple(NetType(base | extra) for extra in extras)

    @property
    def blank_signature(self) -> Interaction:
        """Interaction assigned to events whose arcs never touch the support
        (or that label no arc at all)."""
        return Interaction.FREE if self is Family.FREE else Interaction.USED


def family_types() -> tuple[NetType, ...]:
    """All five types covered by the two families, FREE first."""
    return Family.FREE.types() + Family.USED.types()


def parse_family(token: str) -> Family:
    try:
        return Family(token.strip().lower())
    except ValueError:
        raise ValueError(f"unknown family {token!r}; expected free or used") from None


def _support_map(
    subject: Subject, support: Mapping[str, int] | AbstractSet[str] | Iterable[str]
) -> dict[str, int]:
    states = subject.states
    if isinstance(support, Mapping):
        result = {s: int(support[s]) for s in states if s in support}
        if len(result) != len(states):
            missing = [s for s in states if s not in support]
            raise RegionDomainError(f"support misses states {missing[:5]}")
        return result
    chosen = set(support)
    unknown = chosen - set(states)
    if unknown:
        raise RegionDomainError(f"support names unknown states {sorted(unknown)[:5]}")
    return {s: (1 if s in chosen else 0) for s in states}


def derive_signature(
    subject: Subject,
    support: Mapping[str, int] | AbstractSet[str] | Iterable[str],
    family: Family,
) -> Region:
    """Complete a support to a region candidate using the family's rules.

    Per event, in order of precedence:

    * the family's blank interaction (free resp. used) if every endpoint of
      every arc of the event lies outside resp. inside the support (vacuously
      for events with no arcs);
    * ``set`` if some chain ``s -e-> s' <-e-> s''`` has support 0 at ``s``
      and 1 at both ``s'`` and ``s''``;
    * ``swap`` if some arc of the event flips the support bit;
    * ``nop`` otherwise.

    The result is *not* guaranteed to be a valid region; callers must check
    with :func:`validate_region`.
    """
    sup = _support_map(subject, support)
    arcs_by_event: dict[str, list] = {e: [] for e in subject.events}
    for arc in subject.arcs:
        arcs_by_event[arc.event].append(arc)
    step: dict[tuple[str, str], str] = {
        (a.source, a.event): a.target for a in subject.arcs
    }

    blank_bit = 0 if family is Family.FREE else 1
    signature: dict[str, Interaction] = {}
    for event in subject.events:
        arcs = arcs_by_event[event]
        if all(
            sup[a.source] == blank_bit and sup[a.target] == blank_bit for a in arcs
        ):
            signature[event] = family.blank_signature
            continue
        lifted = False
        for arc in arcs:
            if sup[arc.source] == 0 and sup[arc.target] == 1:
                third = step.get((arc.target, event))
                if (
                    third is not None
                    and step.get((third, event)) == arc.target
                    and sup[third] == 1
                ):
                    lifted = True
                    break
        if lifted:
            signature[event] = Interaction.SET
            continue
        if any(sup[a.source] != sup[a.target] for a in arcs):
            signature[event] = Interaction.SWAP
            continue
        signature[event] = Interaction.NOP
    return Region(support=sup, signature=signature)


def _check_domains(subject: Subject, tau: NetType, region: Region) -> None:
    states = subject.states
    events = subject.events
    missing_states = [s for s in states if s not in region.support]
    if missing_states:
        raise RegionDomainError(f"support misses states {missing_states[:5]}")
    extra_states = set(region.support) - set(states)
    if extra_states:
        raise RegionDomainError(
            f"support names unknown states {sorted(extra_states)[:5]}"
        )
    missing_events = [e for e in events if e not in region.signature]
    if missing_events:
        raise RegionDomainError(f"signature misses events {missing_events[:5]}")
    extra_events = set(region.signature) - set(events)
    if extra_events:
        raise RegionDomainError(
            f"signature names unknown events {sorted(extra_events)[:5]}"
        )
    for state in states:
        if region.support[state] not in (0, 1):
            raise RegionDomainError(f"support of {state!r} is not a bit")
    outside = [e for e in events if region.signature[e] not in tau]
    if outside:
        raise RegionDomainError(
            f"signature uses interactions outside the net type on {outside[:5]}"
        )


def validate_region(subject: Subject, tau: NetType, region: Region) -> bool:
    """True iff the region is valid on every arc of the subject.

    Domain mismatches (missing/extra states or events, signature values not
    in ``tau``) raise :class:`RegionDomainError` instead of returning False.
    """
    _check_domains(subject, tau, region)
    sup = region.support
    sig = region.signature
    for arc in subject.arcs:
        if sig[arc.event].apply(sup[arc.source]) != sup[arc.target]:
            return False
    return True


def region_coherence_report(
    subject: Subject, tau: NetType, region: Region
) -> Report:
    """Structural coherence facts every valid region must satisfy.

    * ``arc-image``: every arc's support pair must be realized by the arc
      event's interaction (path images stay inside the type).
    * ``flip-mismatch``: on a two-way arc, the support bits differ exactly
      when the signature is swap.
    * ``swap-return``: on a chain ``s -e-> s' <-e-> s''`` of three distinct
      states whose event has signature swap, ``s`` and ``s''`` agree.
    """
    _check_domains(subject, tau, region)
    sup = region.support
    sig = region.signature
    step: dict[tuple[str, str], str] = {
        (a.source, a.event): a.target for a in subject.arcs
    }
    violations: list[Violation] = []
    for arc in subject.arcs:
        expected = sig[arc.event].apply(sup[arc.source])
        if expected != sup[arc.target]:
            violations.append(
                Violation(
                    "arc-image",
                    f"{arc.source}-{arc.event}->{arc.target}",
                    f"{sup[arc.source]} maps to {expected}, support says "
                    f"{sup[arc.target]}",
                )
            )
    for arc in subject.arcs:
        back = step.get((arc.target, arc.event))
        if back != arc.source:
            continue
        differs = sup[arc.source] != sup[arc.target]
        is_swap = sig[arc.event] is Interaction.SWAP
        if differs != is_swap:
            violations.append(
                Violation(
                    "flip-mismatch",
                    f"{arc.source}<-{arc.event}->{arc.target}",
                    f"support differs={differs} but signature is "
                    f"{sig[arc.event].value}",
                )
            )
    for arc in subject.arcs:
        if sig[arc.event] is not Interaction.SWAP:
            continue
        second = arc.target
        third = step.get((second, arc.event))
        if third is None or step.get((third, arc.event)) != second:
            continue
        first = arc.source
        if len({first, second, third}) != 3:
            continue
        if sup[first] != sup[third]:
            violations.append(
                Violation(
                    "swap-return",
                    f"{first}-{arc.event}->{second}<-{arc.event}->{third}",
                    "ends of a swap chain disagree",
                )
            )
    return Report(tuple(violations))
