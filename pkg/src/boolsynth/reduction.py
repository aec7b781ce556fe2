"""Hardness instances from cubic monotone one-in-three satisfiability.

A cubic monotone formula has negation-free three-variable clauses, every
variable occurring in exactly three of them (so there are as many variables
as clauses). The generator compiles such a formula into a union of small
transition-system gadgets and glues it into a single initialized system.

The construction is tuned to a family of net types: the glued
system has an inhibiting region for a fixed target event/state requirement
if and only if the formula has a one-in-three model, and the model can be
read back off any such region's signature (variables whose event carries
the distinguished total interaction).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .interactions import Interaction, NetType
from .regions import Family, Region, validate_region
from .solving import EventStateAtom
from .ts import (
    Arc,
    Joined,
    Report,
    TransitionSystem,
    TsUnion,
    Violation,
    check_join_preconditions,
    join,
)


class FalsificationError(RuntimeError):
    """A region that should encode a one-in-three model failed to."""


@dataclass(frozen=True)
class CubicCnf:
    """A monotone 3-CNF in which every variable occurs exactly 3 times."""

    clauses: tuple[tuple[str, str, str], ...]

    def __post_init__(self) -> None:
        if not self.clauses:
            raise ValueError("a formula needs at least one clause")
        counts: dict[str, int] = {}
        for clause in self.clauses:
            if len(clause) != 3 or len(set(clause)) != 3:
                raise ValueError(
                    f"clause {clause!r} must hold three distinct variables"
                )
            for name in clause:
                if not name or any(ch.isspace() for ch in name) or "#" in name:
                    raise ValueError(f"bad variable name {name!r}")
                counts[name] = counts.get(name, 0) + 1
        bad = sorted(n for n, c in counts.items() if c != 3)
        if bad:
            raise ValueError(
                f"variables must occur exactly three times; violated by {bad}"
            )

    @cached_property
    def variables(self) -> tuple[str, ...]:
        return tuple(sorted({v for clause in self.clauses for v in clause}))

    def is_model(self, assignment: frozenset[str]) -> bool:
        """True when exactly one variable per clause is in ``assignment``."""
        return all(
            sum(1 for v in clause if v in assignment) == 1
            for clause in self.clauses
        )

    def iter_models(self) -> Iterator[frozenset[str]]:
        """All one-in-three models, lexicographically by sorted contents."""
        m = len(self.clauses)
        if m % 3:
            return  # every model picks one slot per clause: |M| = m/3
        for combo in itertools.combinations(self.variables, m // 3):
            candidate = frozenset(combo)
            if self.is_model(candidate):
                yield candidate


def solve_one_in_three(cnf: CubicCnf) -> Optional[frozenset[str]]:
    """Lexicographically first one-in-three model, or None if unsatisfiable."""
    return next(cnf.iter_models(), None)


#: Satisfiable fixture: one clause repeated thrice; models pick one variable.
PHI_SAT = CubicCnf((("x0", "x1", "x2"),) * 3)

#: Unsatisfiable fixture: four clauses, so any model would need 4/3 variables.
PHI_UNSAT = CubicCnf(
    (("a", "b", "c"), ("a", "b", "d"), ("a", "c", "d"), ("b", "c", "d"))
)


@dataclass(frozen=True)
class RoleMap:
    """Who is who inside a generated instance."""

    family: Family
    target_event: str
    target_state: str
    flip_events: tuple[str, ...]  # must be signed with the swapping interaction
    hold_events: tuple[str, ...]  # must NOT swap (clause guards)
    occ_events: tuple[str, ...]  # must NOT swap (occurrence guards)
    sync_event: str
    shift_event: str
    pad_events: tuple[str, ...]
    clause_events: tuple[str, ...]
    slot_events: tuple[str, ...]
    variables: tuple[str, ...]
    clause_vars: tuple[tuple[str, str, str], ...]
    unique_events: tuple[str, ...]

    @property
    def target_atom(self) -> EventStateAtom:
        return EventStateAtom(self.target_event, self.target_state)


def _two_way(arcs: list[Arc], a: str, event: str, b: str) -> None:
    arcs.append(Arc(a, event, b))
    arcs.append(Arc(b, event, a))


def _anchor_member(j: int, unique: str) -> TransitionSystem:
    s = [f"h_{j}_{x}" for x in range(6)]
    arcs: list[Arc] = []
    _two_way(arcs, s[0], "k", s[1])
    _two_way(arcs, s[1], "m", s[2])
    _two_way(arcs, s[2], f"v_{j}", s[3])
    _two_way(arcs, s[3], "k", s[4])
    _two_way(arcs, s[4], unique, s[5])
    return TransitionSystem.build(initial=s[5], arcs=arcs, name=f"H{j}")


def _calibrate0(unique: str) -> TransitionSystem:
    s = [f"f_0_{x}" for x in range(9)]
    arcs: list[Arc] = []
    for i, event in enumerate(("k", "m", "q0", "k", "m", "q1", "k", unique)):
        _two_way(arcs, s[i], event, s[i + 1])
    return TransitionSystem.build(initial=s[8], arcs=arcs, name="F0")


def _calibrate1(unique: str) -> TransitionSystem:
    s = [f"f_1_{x}" for x in range(6)]
    arcs: list[Arc] = []
    for i, event in enumerate(("k", "q2", "q3", "k", unique)):
        _two_way(arcs, s[i], event, s[i + 1])
    return TransitionSystem.build(initial=s[5], arcs=arcs, name="F1")


def _calibrate2(unique: str) -> TransitionSystem:
    s = [f"f_2_{x}" for x in range(10)]
    arcs: list[Arc] = []
    for i, event in enumerate(
        ("k", "q2", "q0", "z", "q1", "z", "q3", "k", unique)
    ):
        _two_way(arcs, s[i], event, s[i + 1])
    return TransitionSystem.build(initial=s[9], arcs=arcs, name="F2")


def _guard_member(
    name: str, prefix: str, mid_event: str, tail_event: str, unique: str
) -> TransitionSystem:
    """Common shape of clause guards and occurrence guards: a chain with a
    one-way shift arc in the middle."""
    s = [f"{prefix}_{x}" for x in range(9)]
    arcs: list[Arc] = []
    _two_way(arcs, s[0], "k", s[1])
    _two_way(arcs, s[1], mid_event, s[2])
    arcs.append(Arc(s[2], "z", s[3]))  # one-way
    _two_way(arcs, s[3], "z", s[4])
    _two_way(arcs, s[4], mid_event, s[5])
    _two_way(arcs, s[5], tail_event, s[6])
    _two_way(arcs, s[6], "k", s[7])
    _two_way(arcs, s[7], unique, s[8])
    return TransitionSystem.build(initial=s[8], arcs=arcs, name=name)


def _big_clause_member(
    i: int,
    clause: tuple[str, str, str],
    family: Family,
    unique: str,
) -> TransitionSystem:
    s = [f"t_{i}_0_{x}" for x in range(18)]
    x0, x1, x2 = clause
    a0, a1, a2 = f"a_{3 * i}", f"a_{3 * i + 1}", f"a_{3 * i + 2}"
    head, tail = f"v_{4 * i}", f"w_{i}"
    if family is Family.USED:
        head, tail = tail, head
    arcs: list[Arc] = []
    _two_way(arcs, s[0], "k", s[1])
    _two_way(arcs, s[1], head, s[2])
    _two_way(arcs, s[2], a0, s[3])
    _two_way(arcs, s[3], x0, s[4])
    arcs.append(Arc(s[5], x0, s[4]))  # one-way
    _two_way(arcs, s[5], a0, s[6])
    _two_way(arcs, s[6], a1, s[7])
    _two_way(arcs, s[7], x1, s[8])
    arcs.append(Arc(s[9], x1, s[8]))  # one-way
    _two_way(arcs, s[9], a1, s[10])
    _two_way(arcs, s[10], a2, s[11])
    _two_way(arcs, s[11], x2, s[12])
    arcs.append(Arc(s[13], x2, s[12]))  # one-way
    _two_way(arcs, s[13], a2, s[14])
    _two_way(arcs, s[14], tail, s[15])
    _two_way(arcs, s[15], "k", s[16])
    _two_way(arcs, s[16], unique, s[17])
    return TransitionSystem.build(initial=s[17], arcs=arcs, name=f"T{i}_0")


def _small_clause_member(
    i: int, alpha: int, first: str, second: str, unique: str
) -> TransitionSystem:
    s = [f"t_{i}_{alpha}_{x}" for x in range(5)]
    arcs: list[Arc] = []
    _two_way(arcs, s[0], first, s[1])
    _two_way(arcs, s[1], f"v_{4 * i + alpha}", s[2])
    _two_way(arcs, s[2], second, s[3])
    _two_way(arcs, s[3], unique, s[4])
    return TransitionSystem.build(initial=s[4], arcs=arcs, name=f"T{i}_{alpha}")


def _reserved_event_names(m: int) -> set[str]:
    members = 12 * m + 3
    reserved = {"k", "m", "z", "q0", "q1", "q2", "q3"}
    reserved.update(f"v_{j}" for j in range(4 * m))
    reserved.update(f"w_{i}" for i in range(m))
    reserved.update(f"a_{l}" for l in range(3 * m))
    reserved.update(f"y_{j}" for j in range(m))
    reserved.update(f"p_{l}" for l in range(3 * m))
    reserved.update(f"u_{i}" for i in range(members))
    for i in range(members):
        reserved.update(
            (f"seal_{i}", f"step_{i}", f"side_{i}", f"entry_{i}")
        )
    return reserved


def build_union(cnf: CubicCnf, family: Family) -> tuple[TsUnion, RoleMap]:
    """The gadget union for a formula: anchors for every flip event,
    calibration members, clause and occurrence guards, and four members per
    clause wiring its variables together."""
    m = len(cnf.clauses)
    reserved = _reserved_event_names(m)
    colliding = sorted(set(cnf.variables) & reserved)
    if colliding:
        raise ValueError(
            "variable names collide with generated event names: "
            f"{colliding}; rename the variables"
        )
    members: list[TransitionSystem] = []

    def unique() -> str:
        return f"u_{len(members)}"

    for j in range(4 * m):
        members.append(_anchor_member(j, unique()))
    members.append(_calibrate0(unique()))
    members.append(_calibrate1(unique()))
    members.append(_calibrate2(unique()))
    for j in range(m):
        members.append(
            _guard_member(f"G{j}", f"g_{j}", f"y_{j}", f"w_{j}", unique())
        )
    for l in range(3 * m):
        members.append(
            _guard_member(f"D{l}", f"d_{l}", f"p_{l}", f"a_{l}", unique())
        )
    for i, clause in enumerate(cnf.clauses):
        members.append(_big_clause_member(i, clause, family, unique()))
        x0, x1, x2 = clause
        for alpha, (first, second) in enumerate(
            ((x0, x1), (x0, x2), (x1, x2)), start=1
        ):
            members.append(_small_clause_member(i, alpha, first, second, unique()))
    union = TsUnion(members=tuple(members))
    roles = RoleMap(
        family=family,
        target_event="k",
        target_state="h_0_2",
        flip_events=tuple(f"v_{j}" for j in range(4 * m)),
        hold_events=tuple(f"w_{i}" for i in range(m)),
        occ_events=tuple(f"a_{l}" for l in range(3 * m)),
        sync_event="m",
        shift_event="z",
        pad_events=("q0", "q1", "q2", "q3"),
        clause_events=tuple(f"y_{j}" for j in range(m)),
        slot_events=tuple(f"p_{l}" for l in range(3 * m)),
        variables=cnf.variables,
        clause_vars=cnf.clauses,
        unique_events=tuple(f"u_{i}" for i in range(len(members))),
    )
    return union, roles


@dataclass(frozen=True)
class GadgetInstance:
    """A compiled hardness instance: the glued system plus its role map."""

    cnf: CubicCnf
    family: Family
    union: TsUnion
    joined: Joined
    roles: RoleMap

    @property
    def ts(self) -> TransitionSystem:
        return self.joined.ts

    @property
    def target_atom(self) -> EventStateAtom:
        return self.roles.target_atom


def build_instance(cnf: CubicCnf, family: Family) -> GadgetInstance:
    """Compile a formula into a single initialized transition system."""
    union, roles = build_union(cnf, family)
    report = check_join_preconditions(union)
    if not report.ok:
        raise AssertionError(
            f"generated union violates gluing preconditions:\n{report}"
        )
    name = f"instance_{family.name.lower()}_m{len(cnf.clauses)}"
    joined = join(union, name=name)
    return GadgetInstance(
        cnf=cnf, family=family, union=union, joined=joined, roles=roles
    )


def verify_inhibiting_region(
    instance: GadgetInstance, tau: NetType, region: Region
) -> Report:
    """Check that a region is an admissible inhibitor of the instance's
    target requirement and respects every structural role constraint."""
    violations: list[Violation] = []
    roles = instance.roles
    if tau not in instance.family.types():
        violations.append(
            Violation(
                "family-type",
                str(tau),
                f"net type outside the {instance.family.name} family",
            )
        )
    try:
        admissible = validate_region(instance.ts, tau, region)
    except Exception as exc:  # domain mismatch
        violations.append(Violation("region-domain", "region", str(exc)))
        return Report(tuple(violations))
    if not admissible:
        violations.append(
            Violation("region-invalid", "region", "region violates an arc")
        )
    sig = region.signature
    sup = region.support
    if not region.inhibits(roles.target_event, roles.target_state):
        violations.append(
            Violation(
                "not-inhibiting",
                roles.target_event,
                "signature is defined on the target state's support value",
            )
        )
    for event in roles.flip_events:
        if sig.get(event) is not Interaction.SWAP:
            violations.append(
                Violation("flip-signature", event, "must carry swap")
            )
    for event in roles.hold_events + roles.occ_events:
        if sig.get(event) is Interaction.SWAP:
            violations.append(
                Violation("steady-signature", event, "must not carry swap")
            )
    k_sig = sig.get(roles.target_event)
    target_sup = sup.get(roles.target_state)
    polarity_ok = (k_sig is Interaction.FREE and target_sup == 1) or (
        k_sig is Interaction.USED and target_sup == 0
    )
    if not polarity_ok:
        violations.append(
            Violation(
                "target-polarity",
                roles.target_event,
                "target must be freeness-inhibited at support 1 or "
                "usedness-inhibited at support 0",
            )
        )
    return Report(tuple(violations))


def extract_model(instance: GadgetInstance, region: Region) -> frozenset[str]:
    """Read the one-in-three model off an inhibiting region's signature.

    Raises FalsificationError if the region does not inhibit the target
    requirement or the extracted assignment is not a model — either would
    contradict the construction's correctness claim.
    """
    roles = instance.roles
    sig = region.signature
    if not region.inhibits(roles.target_event, roles.target_state):
        raise FalsificationError(
            "region does not inhibit the target requirement"
        )
    k_sig = sig.get(roles.target_event)
    if instance.family is Family.FREE:
        if k_sig is not Interaction.FREE:
            raise FalsificationError(
                f"target event carries {k_sig}, expected the freeness test"
            )
        marker = Interaction.SET
    elif k_sig is Interaction.USED:
        marker = Interaction.SET
    elif k_sig is Interaction.FREE:
        marker = Interaction.RES
    else:
        raise FalsificationError(
            f"target event carries {k_sig}, expected usedness or freeness"
        )
    model = frozenset(
        v for v in roles.variables if sig.get(v) is marker
    )
    if not instance.cnf.is_model(model):
        raise FalsificationError(
            f"extracted assignment {sorted(model)} hits some clause "
            "zero or multiple times"
        )
    return model
