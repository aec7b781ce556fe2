"""Deterministic initialized labeled transition systems, unions, and joining.

A transition system here is finite, deterministic (per state and event at most
one outgoing arc), initialized, and intended to be reachable with every event
occurring on at least one arc; ``validate_ts`` reports violations of the
reachability/occurrence conventions rather than refusing construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Union


@dataclass(frozen=True)
class Arc:
    """A labeled transition ``source --event--> target``."""

    source: str
    event: str
    target: str

    def __iter__(self):
        return iter((self.source, self.event, self.target))


def _as_arc(item: Arc | Sequence[str]) -> Arc:
    if isinstance(item, Arc):
        return item
    source, event, target = item
    return Arc(source, event, target)


@dataclass(frozen=True)
class Violation:
    """One failed invariant, with the offending subject."""

    code: str
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.code}: {self.subject}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass(frozen=True)
class Report:
    """Outcome of a structural validation."""

    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class TransitionSystem:
    """A deterministic initialized labeled transition system.

    ``states`` and ``events`` are kept in a fixed order (initial state first,
    then first-seen order in the arc list, unless given explicitly); all
    canonical enumerations in the solvers derive from these orders.
    """

    initial: str
    arcs: tuple[Arc, ...]
    states: tuple[str, ...]
    events: tuple[str, ...]
    name: str = ""

    @classmethod
    def build(
        cls,
        initial: str,
        arcs: Iterable[Arc | Sequence[str]],
        states: Optional[Iterable[str]] = None,
        events: Optional[Iterable[str]] = None,
        name: str = "",
    ) -> "TransitionSystem":
        """Construct from an arc list, inferring state/event order if absent."""
        arc_tuple = tuple(_as_arc(a) for a in arcs)
        if states is None:
            ordered: dict[str, None] = {initial: None}
            for arc in arc_tuple:
                ordered.setdefault(arc.source, None)
                ordered.setdefault(arc.target, None)
            state_tuple = tuple(ordered)
        else:
            state_tuple = tuple(dict.fromkeys(states))
        if events is None:
            seen: dict[str, None] = {}
            for arc in arc_tuple:
                seen.setdefault(arc.event, None)
            event_tuple = tuple(seen)
        else:
            event_tuple = tuple(dict.fromkeys(events))
        return cls(
            initial=initial,
            arcs=arc_tuple,
            states=state_tuple,
            events=event_tuple,
            name=name,
        )

    def __post_init__(self) -> None:
        states = set(self.states)
        if self.initial not in states:
            raise ValueError(f"initial state {self.initial!r} not among states")
        events = set(self.events)
        step: dict[tuple[str, str], str] = {}
        for arc in self.arcs:
            if arc.source not in states or arc.target not in states:
                raise ValueError(f"arc {arc} uses an undeclared state")
            if arc.event not in events:
                raise ValueError(f"arc {arc} uses an undeclared event")
            key = (arc.source, arc.event)
            if key in step:
                raise ValueError(
                    f"nondeterministic: {arc.source!r} has two arcs for "
                    f"event {arc.event!r}"
                )
            step[key] = arc.target

    @cached_property
    def step_map(self) -> dict[tuple[str, str], str]:
        return {(a.source, a.event): a.target for a in self.arcs}

    def step(self, state: str, event: str) -> Optional[str]:
        """The successor of ``state`` under ``event``, or None."""
        return self.step_map.get((state, event))

    def enabled(self, state: str, event: str) -> bool:
        return (state, event) in self.step_map

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {s: k for k, s in enumerate(self.states)}

    @cached_property
    def event_index(self) -> dict[str, int]:
        return {e: k for k, e in enumerate(self.events)}

    def reachable_states(self) -> set[str]:
        """States reachable from the initial state."""
        seen = {self.initial}
        frontier = [self.initial]
        succ: dict[str, list[str]] = {}
        for arc in self.arcs:
            succ.setdefault(arc.source, []).append(arc.target)
        while frontier:
            state = frontier.pop()
            for nxt in succ.get(state, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen


def validate_ts(ts: TransitionSystem) -> Report:
    """Check the transition-system conventions; list every violation.

    Determinism and declaredness are already enforced structurally at
    construction; this re-checks them defensively and adds reachability and
    event-occurrence checks.
    """
    violations: list[Violation] = []
    states = set(ts.states)
    if len(states) != len(ts.states):
        violations.append(Violation("duplicate-state", ts.name or "ts"))
    if len(set(ts.events)) != len(ts.events):
        violations.append(Violation("duplicate-event", ts.name or "ts"))
    seen_step: set[tuple[str, str]] = set()
    used_events: set[str] = set()
    for arc in ts.arcs:
        used_events.add(arc.event)
        key = (arc.source, arc.event)
        if key in seen_step:
            violations.append(
                Violation("nondeterministic", f"{arc.source}/{arc.event}")
            )
        seen_step.add(key)
    for event in ts.events:
        if event not in used_events:
            violations.append(
                Violation("unused-event", event, "labels no arc")
            )
    reachable = ts.reachable_states()
    for state in ts.states:
        if state not in reachable:
            violations.append(
                Violation("unreachable-state", state, "no path from initial")
            )
    return Report(tuple(violations))


def grade(subject: "TransitionSystem | TsUnion") -> int:
    """Max over states of max(in-degree, out-degree), arcs counted one by one."""
    if isinstance(subject, TsUnion):
        return max(grade(member) for member in subject.members)
    in_deg: dict[str, int] = {}
    out_deg: dict[str, int] = {}
    for arc in subject.arcs:
        out_deg[arc.source] = out_deg.get(arc.source, 0) + 1
        in_deg[arc.target] = in_deg.get(arc.target, 0) + 1
    best = 0
    for state in subject.states:
        best = max(best, in_deg.get(state, 0), out_deg.get(state, 0))
    return best


@dataclass(frozen=True)
class TsUnion:
    """Finitely many transition systems with disjoint states, shared events.

    Separation questions over a union treat the arcs of all members together;
    state-pair separation only ranges over pairs inside one member, while
    event/state inhibition ranges over all states of all members.
    """

    members: tuple[TransitionSystem, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("a union needs at least one member")
        seen: dict[str, int] = {}
        for idx, member in enumerate(self.members):
            for state in member.states:
                if state in seen:
                    raise ValueError(
                        f"state {state!r} appears in members {seen[state]} "
                        f"and {idx}; union members must be state-disjoint"
                    )
                seen[state] = idx

    @classmethod
    def of(cls, *members: TransitionSystem) -> "TsUnion":
        return cls(tuple(members))

    @cached_property
    def states(self) -> tuple[str, ...]:
        return tuple(s for member in self.members for s in member.states)

    @cached_property
    def events(self) -> tuple[str, ...]:
        ordered: dict[str, None] = {}
        for member in self.members:
            for event in member.events:
                ordered.setdefault(event, None)
        return tuple(ordered)

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(a for member in self.members for a in member.arcs)

    @cached_property
    def member_of(self) -> dict[str, int]:
        return {
            state: idx
            for idx, member in enumerate(self.members)
            for state in member.states
        }


def validate_union(union: TsUnion) -> Report:
    """Member-wise validation (disjointness is enforced at construction)."""
    violations: list[Violation] = []
    for idx, member in enumerate(union.members):
        for violation in validate_ts(member).violations:
            violations.append(
                Violation(
                    violation.code,
                    f"member {idx}: {violation.subject}",
                    violation.detail,
                )
            )
    return Report(tuple(violations))


def check_join_preconditions(union: TsUnion) -> Report:
    """Conditions under which joining preserves all separation verdicts.

    1. Every event must miss at least one state of the union (some state
       where it is not enabled).
    2. Each member's initial state must have exactly one incoming and one
       outgoing arc, both labeled with one event that occurs nowhere else in
       the whole union (a private handle on the initial state).
    """
    violations: list[Violation] = []
    all_states = union.states
    enabled_somewhere: dict[str, set[str]] = {e: set() for e in union.events}
    occurrence_count: dict[str, int] = {e: 0 for e in union.events}
    for arc in union.arcs:
        enabled_somewhere[arc.event].add(arc.source)
        occurrence_count[arc.event] += 1
    for event in union.events:
        if len(enabled_somewhere[event]) == len(all_states):
            violations.append(
                Violation(
                    "event-misses-no-state",
                    event,
                    "enabled at every state of the union",
                )
            )
    for idx, member in enumerate(union.members):
        start = member.initial
        incoming = [a for a in member.arcs if a.target == start]
        outgoing = [a for a in member.arcs if a.source == start]
        if len(incoming) != 1 or len(outgoing) != 1:
            violations.append(
                Violation(
                    "initial-degree",
                    f"member {idx}: {start}",
                    f"{len(incoming)} in / {len(outgoing)} out, need 1/1",
                )
            )
            continue
        label_in = incoming[0].event
        label_out = outgoing[0].event
        if label_in != label_out:
            violations.append(
                Violation(
                    "initial-label",
                    f"member {idx}: {start}",
                    f"in {label_in!r} vs out {label_out!r}",
                )
            )
            continue
        if occurrence_count[label_out] != 2:
            violations.append(
                Violation(
                    "handle-not-private",
                    f"member {idx}: {label_out}",
                    "the initial-state event occurs elsewhere in the union",
                )
            )
    return Report(tuple(violations))


@dataclass(frozen=True)
class Joined:
    """A union glued into one transition system plus the gluing bookkeeping.

    A fresh rail of states threads the members together; each member is
    entered through a three-state branch hanging off its rail section, via a
    fresh entry event looping on the member's initial state.
    """

    ts: TransitionSystem
    rail_states: tuple[str, ...]
    branch_states: tuple[tuple[str, str, str], ...]
    seal_events: tuple[str, ...]
    step_events: tuple[str, ...]
    side_events: tuple[str, ...]
    entry_events: tuple[str, ...]

    @property
    def fresh_events(self) -> tuple[str, ...]:
        out: list[str] = []
        for quad in zip(
            self.seal_events, self.step_events, self.side_events, self.entry_events
        ):
            out.extend(quad)
        return tuple(out)


def join(union: TsUnion, name: str = "") -> Joined:
    """Glue the members of a union into a single transition system.

    For member ``i`` with rail states ``r0..r4`` (shared boundaries between
    neighbors) and branch states ``b1..b3``::

        r0 <-seal_i-> r1 -step_i-> r2 <-step_i-> r3 <-seal_i-> r4
                                   r2 -side_i-> b1 <-side_i-> b2
                                   b2 <-step_i-> b3 <-entry_i-> initial_i

    The joined system starts at the first rail state. Fresh state/event names
    must not collide with member names; collisions raise ValueError.
    """
    n = len(union.members)
    rail = [f"rail_{k}" for k in range(4 * n + 1)]
    branches = [
        (f"branch_{i}_1", f"branch_{i}_2", f"branch_{i}_3") for i in range(n)
    ]
    seal = [f"seal_{i}" for i in range(n)]
    step = [f"step_{i}" for i in range(n)]
    side = [f"side_{i}" for i in range(n)]
    entry = [f"entry_{i}" for i in range(n)]

    member_states = set(union.states)
    member_events = set(union.events)
    fresh_states = set(rail) | {s for triple in branches for s in triple}
    fresh_events = set(seal) | set(step) | set(side) | set(entry)
    state_clash = member_states & fresh_states
    event_clash = member_events & fresh_events
    if state_clash:
        raise ValueError(f"member states collide with rail names: {sorted(state_clash)}")
    if event_clash:
        raise ValueError(f"member events collide with fresh events: {sorted(event_clash)}")

    arcs: list[Arc] = []
    states: list[str] = [rail[0]]
    events: list[str] = []
    for i, member in enumerate(union.members):
        r0, r1, r2, r3, r4 = rail[4 * i : 4 * i + 5]
        b1, b2, b3 = branches[i]
        arcs.extend(
            [
                Arc(r0, seal[i], r1),
                Arc(r1, seal[i], r0),
                Arc(r1, step[i], r2),
                Arc(r2, step[i], r3),
                Arc(r3, step[i], r2),
                Arc(r3, seal[i], r4),
                Arc(r4, seal[i], r3),
                Arc(r2, side[i], b1),
                Arc(b1, side[i], b2),
                Arc(b2, side[i], b1),
                Arc(b2, step[i], b3),
                Arc(b3, step[i], b2),
                Arc(b3, entry[i], member.initial),
                Arc(member.initial, entry[i], b3),
            ]
        )
        arcs.extend(member.arcs)
        states.extend((r1, r2, r3, r4, b1, b2, b3))
        states.extend(member.states)
        events.extend((seal[i], step[i], side[i], entry[i]))
        events.extend(member.events)
    ts = TransitionSystem(
        initial=rail[0],
        arcs=tuple(arcs),
        states=tuple(states),
        events=tuple(dict.fromkeys(events)),
        name=name or "joined",
    )
    return Joined(
        ts=ts,
        rail_states=tuple(rail),
        branch_states=tuple(branches),
        seal_events=tuple(seal),
        step_events=tuple(step),
        side_events=tuple(side),
        entry_events=tuple(entry),
    )


Subject = Union[TransitionSystem, TsUnion]
