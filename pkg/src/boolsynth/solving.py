"""Deciding separation properties of transition systems.

Two interchangeable engines answer, for a subject (a transition system or a
union of them) and a boolean net type, whether regions witness every state
separation requirement (distinct states told apart by some region's support)
and every event inhibition requirement (a region whose signature is undefined
on the support value of a state the event must not fire in).

* The exhaustive engine enumerates candidate supports as integers in
  lexicographic order over the subject's state list and derives the allowed
  signatures arc by arc.
* The propositional engine encodes region admissibility as CNF over support
  bits and signature selectors and answers individual requirements through
  assumption-based incremental SAT queries.

Both engines pool every witnessing region they find and skip requirements an
earlier region already settles, so verdicts stay cheap on large subjects.
For a fixed subject the two engines agree on all verdicts and report the
same (canonically first) counterexample; only the shape of the witnessing
regions may differ.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Union

from .interactions import (
    INTERACTION_ORDER,
    Interaction,
    NetType,
    UNDEFINED_AT,
    interactions_matching,
    require_usable,
)
from .regions import Region, validate_region
from .ts import Subject, TransitionSystem, TsUnion


class ResourceExhausted(RuntimeError):
    """A computation hit its time or conflict budget before a verdict."""


class EngineError(RuntimeError):
    """An engine produced a witness that failed re-validation."""


@dataclass(frozen=True)
class StatePairAtom:
    """Requirement that two distinct states be distinguished by a region."""

    first: str
    second: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"ssp {self.first} {self.second}"


@dataclass(frozen=True)
class EventStateAtom:
    """Requirement that an event be inhibited at a state it must not fire in."""

    event: str
    state: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"essp {self.event} {self.state}"


Atom = Union[StatePairAtom, EventStateAtom]

_PARTIALS = tuple(i for i in INTERACTION_ORDER if i.is_partial)
_GLOBAL_INDEX = {i: idx for idx, i in enumerate(INTERACTION_ORDER)}
_MATCH_MASK = {
    (a, b): sum(1 << _GLOBAL_INDEX[i] for i in interactions_matching(a, b))
    for a in (0, 1)
    for b in (0, 1)
}
_PARTIAL_MASK_AT = {
    b: sum(1 << _GLOBAL_INDEX[i] for i in UNDEFINED_AT[b]) for b in (0, 1)
}


def _undefined_bit(interaction: Interaction) -> int:
    """The token value on which a partial interaction is undefined."""
    return 0 if interaction.effect[0] is None else 1


def ssp_atoms(subject: Subject) -> Iterator[StatePairAtom]:
    """All state separation requirements of ``subject``, canonical order.

    For a union only same-member pairs are requirements.
    """
    if isinstance(subject, TsUnion):
        members: Sequence[TransitionSystem] = subject.members
    else:
        members = (subject,)
    for member in members:
        states = member.states
        for i in range(len(states)):
            for j in range(i + 1, len(states)):
                yield StatePairAtom(states[i], states[j])


def essp_atoms(subject: Subject) -> Iterator[EventStateAtom]:
    """All event inhibition requirements of ``subject``, canonical order."""
    enabled = {(arc.source, arc.event) for arc in subject.arcs}
    for event in subject.events:
        for state in subject.states:
            if (state, event) not in enabled:
                yield EventStateAtom(event, state)


def _deadline_from_budget(budget: Optional[float]) -> Optional[float]:
    if budget is None:
        return None
    return time.monotonic() + budget


class _Problem:
    """Indexed, bitmask-friendly view of a subject under a net type."""

    def __init__(self, subject: Subject, tau: NetType) -> None:
        require_usable(tau)
        self.subject = subject
        self.tau = tau
        self.states: list[str] = list(subject.states)
        self.events: list[str] = list(subject.events)
        self.n = len(self.states)
        self.full = (1 << self.n) - 1
        self.state_pos = {s: i for i, s in enumerate(self.states)}
        self.event_pos = {e: i for i, e in enumerate(self.events)}
        arcs_by_event: list[list[tuple[int, int]]] = [[] for _ in self.events]
        enabled: list[int] = [0 for _ in self.events]
        for arc in subject.arcs:
            e = self.event_pos[arc.event]
            src = self.state_pos[arc.source]
            dst = self.state_pos[arc.target]
            arcs_by_event[e].append((src, dst))
            enabled[e] |= self.state_bit(src)
        self.arcs_by_event = arcs_by_event
        self.enabled_mask = enabled
        self.tau_list = [i for i in INTERACTION_ORDER if i in tau]
        self.tau_mask = sum(1 << _GLOBAL_INDEX[i] for i in self.tau_list)
        self.partials = [i for i in self.tau_list if i.is_partial]

    def state_bit(self, pos: int) -> int:
        """Bit of state ``pos`` in a support integer (state 0 is the MSB,
        so ascending integers enumerate supports in lexicographic order)."""
        return 1 << (self.n - 1 - pos)

    def support_value(self, support_int: int, pos: int) -> int:
        return (support_int >> (self.n - 1 - pos)) & 1

    def allowed_mask(self, event_idx: int, support_int: int) -> int:
        """Interactions (as a bitmask over the canonical order) consistent
        with every arc of the event under the given support."""
        mask = self.tau_mask
        n1 = self.n - 1
        for src, dst in self.arcs_by_event[event_idx]:
            mask &= _MATCH_MASK[
                (support_int >> (n1 - src)) & 1, (support_int >> (n1 - dst)) & 1
            ]
            if not mask:
                break
        return mask

    def first_of_mask(self, mask: int) -> Interaction:
        return INTERACTION_ORDER[(mask & -mask).bit_length() - 1]

    def region_at(
        self, support_int: int, forced: Optional[dict[int, Interaction]] = None
    ) -> Region:
        """Region with the given support; each signature entry is the first
        allowed interaction in canonical order (unless forced)."""
        support = {
            s: self.support_value(support_int, p) for p, s in enumerate(self.states)
        }
        signature: dict[str, Interaction] = {}
        for e, event in enumerate(self.events):
            if forced and e in forced:
                signature[event] = forced[e]
                continue
            mask = self.allowed_mask(e, support_int)
            if not mask:
                raise EngineError(f"no admissible interaction for event {event!r}")
            signature[event] = self.first_of_mask(mask)
        region = Region(support=support, signature=signature)
        if not validate_region(self.subject, self.tau, region):
            raise EngineError("engine produced an inadmissible region")
        return region

    def support_int_of(self, region: Region) -> int:
        value = 0
        for pos, state in enumerate(self.states):
            if region.support[state]:
                value |= self.state_bit(pos)
        return value

    def initial_blocks(self) -> list[int]:
        """Starting partition for separation tracking: pairs inside one block
        are requirements, pairs across blocks are not."""
        if isinstance(self.subject, TsUnion):
            blocks = []
            for member in self.subject.members:
                mask = 0
                for state in member.states:
                    mask |= self.state_bit(self.state_pos[state])
                blocks.append(mask)
            return [b for b in blocks if b & (b - 1)]
        return [self.full] if self.n > 1 else []

    def first_pending_pair(self, blocks: Sequence[int]) -> tuple[int, int]:
        """Canonically first state pair that still shares a block."""
        best = max(blocks, key=int.bit_length)
        first_bit = 1 << (best.bit_length() - 1)
        rest = best ^ first_bit
        second_bit = 1 << (rest.bit_length() - 1)
        return self.n - first_bit.bit_length(), self.n - second_bit.bit_length()

    def refine(self, blocks: list[int], support_int: int) -> bool:
        """Split blocks by a support; drops singleton blocks. True if the
        partition changed."""
        changed = False
        out: list[int] = []
        for block in blocks:
            ones = block & support_int
            zeros = block & ~support_int
            if ones and zeros:
                changed = True
                if ones & (ones - 1):
                    out.append(ones)
                if zeros & (zeros - 1):
                    out.append(zeros)
            else:
                out.append(block)
        if changed:
            blocks[:] = out
        return changed

    def apply_coverage(self, region: Region, uncovered: list[int]) -> None:
        """Drop from ``uncovered`` (one mask per event) every state at which
        the region inhibits the event."""
        support_int = self.support_int_of(region)
        inverse = ~support_int & self.full
        for e, event in enumerate(self.events):
            if not uncovered[e]:
                continue
            interaction = region.signature[event]
            if not interaction.is_partial:
                continue
            mask = support_int if _undefined_bit(interaction) == 1 else inverse
            uncovered[e] &= ~mask


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a separation check, with the witnessing region pool."""

    property_name: str  # "ssp" | "essp" | "feasible"
    outcome: str  # "yes" | "no" | "inconclusive"
    engine: str
    counterexample: Optional[Atom]
    regions: tuple[Region, ...]
    reason: str = ""

    @property
    def holds(self) -> bool:
        return self.outcome == "yes"

    def __bool__(self) -> bool:
        return self.holds

    def witness_for(self, atom: Atom) -> Optional[Region]:
        """First pooled region settling the given requirement, if any."""
        if isinstance(atom, StatePairAtom):
            for region in self.regions:
                if region.separates(atom.first, atom.second):
                    return region
            return None
        for region in self.regions:
            if region.inhibits(atom.event, atom.state):
                return region
        return None


class _RegionPool:
    """Deduplicating, order-preserving collection of witness regions."""

    def __init__(self) -> None:
        self._by_key: dict = {}

    def add(self, region: Region) -> None:
        self._by_key.setdefault(region.key(), region)

    def regions(self) -> tuple[Region, ...]:
        return tuple(self._by_key.values())


def _resolve_engine(engine: str, problem: _Problem) -> str:
    if engine == "auto":
        return "exhaustive" if problem.n <= 16 else "sat"
    if engine in ("exhaustive", "sat"):
        return engine
    raise ValueError(f"unknown engine {engine!r}")


# --------------------------------------------------------------- exhaustive


def _exhaustive_check(
    problem: _Problem,
    want_ssp: bool,
    want_essp: bool,
    deadline: Optional[float],
) -> tuple[
    Optional[Atom], Optional[Atom], tuple[Region, ...], bool
]:
    """Full-support-sweep decision. Returns (ssp counterexample, essp
    counterexample, pooled regions, completed)."""
    n = problem.n
    full = problem.full
    blocks = problem.initial_blocks() if want_ssp else []
    uncovered: list[int] = []
    if want_essp:
        uncovered = [~m & full for m in problem.enabled_mask]
    pool = _RegionPool()
    n_events = len(problem.events)
    completed = True
    for support in range(1 << n):
        if not blocks and not any(uncovered):
            break
        if deadline is not None and support % 1024 == 0:
            if time.monotonic() > deadline:
                completed = False
                break
        masks = []
        valid = True
        for e in range(n_events):
            mask = problem.allowed_mask(e, support)
            if not mask:
                valid = False
                break
            masks.append(mask)
        if not valid:
            continue
        if blocks:
            if problem.refine(blocks, support):
                pool.add(problem.region_at(support))
        if want_essp:
            for e in range(n_events):
                pending = uncovered[e]
                if not pending:
                    continue
                for bit_value in (0, 1):
                    partial_mask = masks[e] & _PARTIAL_MASK_AT[bit_value]
                    if not partial_mask:
                        continue
                    here = support if bit_value == 1 else ~support & full
                    cover = pending & here
                    if not cover:
                        continue
                    forced = {e: problem.first_of_mask(partial_mask)}
                    pool.add(problem.region_at(support, forced))
                    uncovered[e] &= ~cover
    ssp_fail: Optional[Atom] = None
    essp_fail: Optional[Atom] = None
    if completed:
        if blocks:
            i, j = problem.first_pending_pair(blocks)
            ssp_fail = StatePairAtom(problem.states[i], problem.states[j])
        if want_essp:
            for e in range(n_events):
                if uncovered[e]:
                    pos = n - uncovered[e].bit_length()
                    essp_fail = EventStateAtom(
                        problem.events[e], problem.states[pos]
                    )
                    break
    return ssp_fail, essp_fail, pool.regions(), completed


# ------------------------------------------------------------ propositional


def _support_literal(var: int, bit_value: int) -> int:
    return var if bit_value else -var


class _SatContext:
    """Incremental CNF encoding of region admissibility for one subject and
    net type. Individual requirements are decided under assumptions, so the
    learnt-clause state carries over between queries."""

    def __init__(self, problem: _Problem) -> None:
        from .sat import SatSolver

        self.problem = problem
        self.solver = SatSolver()
        sorted_states = sorted(range(problem.n), key=lambda p: problem.states[p])
        self.sup_var = [0] * problem.n
        for var_offset, pos in enumerate(sorted_states):
            self.sup_var[pos] = var_offset + 1
        base = problem.n
        self.sel_var: dict[tuple[int, Interaction], int] = {}
        for event_pos in sorted(
            range(len(problem.events)), key=lambda p: problem.events[p]
        ):
            for interaction in problem.tau_list:
                base += 1
                self.sel_var[(event_pos, interaction)] = base
        self.solver.ensure_vars(base)
        for clause in _consistency_clauses(
            problem, self.sup_var, self.sel_var
        ):
            self.solver.add_clause(clause)

    def solve_pair(
        self, first_pos: int, second_pos: int, deadline: Optional[float]
    ) -> tuple[str, Optional[Region]]:
        a = self.sup_var[first_pos]
        b = self.sup_var[second_pos]
        for lits in ((a, -b), (-a, b)):
            verdict = self.solver.solve(lits, deadline=deadline)
            if verdict is None:
                return "unknown", None
            if verdict:
                return "sat", self.decode()
        return "unsat", None

    def solve_inhibit(
        self, event_pos: int, state_pos: int, deadline: Optional[float]
    ) -> tuple[str, Optional[Region]]:
        sup = self.sup_var[state_pos]
        for interaction in self.problem.partials:
            sel = self.sel_var[(event_pos, interaction)]
            bit_value = _undefined_bit(interaction)
            verdict = self.solver.solve(
                (sel, _support_literal(sup, bit_value)), deadline=deadline
            )
            if verdict is None:
                return "unknown", None
            if verdict:
                return "sat", self.decode({event_pos: interaction})
        return "unsat", None

    def block_support(self) -> None:
        """Exclude the support of the last model from future answers."""
        model = self.solver.model_value
        clause = []
        for pos in range(self.problem.n):
            var = self.sup_var[pos]
            clause.append(-var if model(var) else var)
        self.solver.add_clause(clause)

    def decode(
        self, forced: Optional[dict[int, Interaction]] = None
    ) -> Region:
        problem = self.problem
        model = self.solver.model_value
        support = {
            state: int(model(self.sup_var[pos]))
            for pos, state in enumerate(problem.states)
        }
        signature: dict[str, Interaction] = {}
        for event_pos, event in enumerate(problem.events):
            if forced and event_pos in forced:
                signature[event] = forced[event_pos]
                continue
            for interaction in problem.tau_list:
                if model(self.sel_var[(event_pos, interaction)]):
                    signature[event] = interaction
                    break
            else:  # pragma: no cover - excluded by the at-least-one clauses
                raise EngineError(f"no interaction selected for {event!r}")
        region = Region(support=support, signature=signature)
        if not validate_region(problem.subject, problem.tau, region):
            raise EngineError("solver model decoded to an inadmissible region")
        return region


def _consistency_clauses(
    problem: _Problem,
    sup_var: Sequence[int],
    sel_var: Mapping[tuple[int, Interaction], int],
) -> Iterator[list[int]]:
    """CNF for 'the chosen signature is consistent with every arc'.

    For every event at least one interaction is selected; a selected
    interaction constrains the support bits along each arc of the event:
    if it is undefined on token b, the source cannot carry b; if it maps
    b to v, a source carrying b forces the target to carry v.
    """
    for event_pos in range(len(problem.events)):
        yield [sel_var[(event_pos, i)] for i in problem.tau_list]
    for event_pos in range(len(problem.events)):
        for src, dst in problem.arcs_by_event[event_pos]:
            for interaction in problem.tau_list:
                guard = -sel_var[(event_pos, interaction)]
                for bit_value in (0, 1):
                    image = interaction.effect[bit_value]
                    src_lit = _support_literal(sup_var[src], 1 - bit_value)
                    if image is None:
                        yield [guard, src_lit]
                        continue
                    dst_lit = _support_literal(sup_var[dst], image)
                    if src_lit == dst_lit:
                        yield [guard, src_lit]
                    elif src_lit == -dst_lit:
                        continue  # tautology (same variable, both phases)
                    else:
                        yield [guard, src_lit, dst_lit]


def _sat_check(
    problem: _Problem,
    want_ssp: bool,
    want_essp: bool,
    deadline: Optional[float],
) -> tuple[Optional[Atom], Optional[Atom], tuple[Region, ...], bool]:
    """Query-driven decision via incremental SAT. Same result contract as
    the exhaustive sweep."""
    ctx = _SatContext(problem)
    pool = _RegionPool()
    completed = True
    ssp_fail: Optional[Atom] = None
    essp_fail: Optional[Atom] = None
    if want_ssp:
        blocks = problem.initial_blocks()
        while blocks:
            if deadline is not None and time.monotonic() > deadline:
                completed = False
                break
            i, j = problem.first_pending_pair(blocks)
            status, region = ctx.solve_pair(i, j, deadline)
            if status == "unknown":
                completed = False
                break
            if status == "unsat":
                ssp_fail = StatePairAtom(problem.states[i], problem.states[j])
                break
            assert region is not None
            pool.add(region)
            problem.refine(blocks, problem.support_int_of(region))
    if want_essp and completed and ssp_fail is None:
        full = problem.full
        uncovered = [~m & full for m in problem.enabled_mask]
        for region in pool.regions():
            problem.apply_coverage(region, uncovered)
        for e in range(len(problem.events)):
            while uncovered[e]:
                if deadline is not None and time.monotonic() > deadline:
                    completed = False
                    break
                state_pos = problem.n - uncovered[e].bit_length()
                status, region = ctx.solve_inhibit(e, state_pos, deadline)
                if status == "unknown":
                    completed = False
                    break
                if status == "unsat":
                    essp_fail = EventStateAtom(
                        problem.events[e], problem.states[state_pos]
                    )
                    break
                assert region is not None
                pool.add(region)
                problem.apply_coverage(region, uncovered)
            if essp_fail is not None or not completed:
                break
    return ssp_fail, essp_fail, pool.regions(), completed


# ------------------------------------------------------------------- public


def _run_check(
    subject: Subject,
    tau: NetType,
    property_name: str,
    engine: str,
    budget: Optional[float],
) -> CheckResult:
    problem = _Problem(subject, tau)
    engine_name = _resolve_engine(engine, problem)
    deadline = _deadline_from_budget(budget)
    want_ssp = property_name in ("ssp", "feasible")
    want_essp = property_name in ("essp", "feasible")
    if engine_name == "exhaustive":
        ssp_fail, essp_fail, regions, completed = _exhaustive_check(
            problem, want_ssp, want_essp, deadline
        )
    else:
        ssp_fail, essp_fail, regions, completed = _sat_check(
            problem, want_ssp, want_essp, deadline
        )
    if not completed:
        return CheckResult(
            property_name=property_name,
            outcome="inconclusive",
            engine=engine_name,
            counterexample=None,
            regions=regions,
            reason="budget exhausted before a verdict",
        )
    counterexample = ssp_fail if ssp_fail is not None else essp_fail
    return CheckResult(
        property_name=property_name,
        outcome="no" if counterexample is not None else "yes",
        engine=engine_name,
        counterexample=counterexample,
        regions=regions,
    )


def check_ssp(
    subject: Subject,
    tau: NetType,
    *,
    engine: str = "auto",
    budget: Optional[float] = None,
) -> CheckResult:
    """Decide whether every pair of distinct states is separated."""
    return _run_check(subject, tau, "ssp", engine, budget)


def check_essp(
    subject: Subject,
    tau: NetType,
    *,
    engine: str = "auto",
    budget: Optional[float] = None,
) -> CheckResult:
    """Decide whether every non-occurring event/state pair is inhibited."""
    return _run_check(subject, tau, "essp", engine, budget)


def check_feasibility(
    subject: Subject,
    tau: NetType,
    *,
    engine: str = "auto",
    budget: Optional[float] = None,
) -> CheckResult:
    """Decide both separation properties (feasibility of synthesis)."""
    return _run_check(subject, tau, "feasible", engine, budget)


def solve_atom(
    subject: Subject,
    tau: NetType,
    atom: Atom,
    *,
    engine: str = "auto",
    budget: Optional[float] = None,
) -> Optional[Region]:
    """Find one admissible region settling the given requirement, or None
    if no such region exists. Raises ResourceExhausted on budget expiry."""
    problem = _Problem(subject, tau)
    engine_name = _resolve_engine(engine, problem)
    deadline = _deadline_from_budget(budget)
    if isinstance(atom, StatePairAtom):
        i = problem.state_pos[atom.first]
        j = problem.state_pos[atom.second]
        if i == j:
            raise ValueError("state pair requirement needs distinct states")
        if engine_name == "sat":
            status, region = _SatContext(problem).solve_pair(i, j, deadline)
            if status == "unknown":
                raise ResourceExhausted("budget exhausted")
            return region
        bit_i, bit_j = problem.state_bit(i), problem.state_bit(j)
        for support in range(1 << problem.n):
            if deadline is not None and support % 1024 == 0:
                if time.monotonic() > deadline:
                    raise ResourceExhausted("budget exhausted")
            if bool(support & bit_i) == bool(support & bit_j):
                continue
            if all(
                problem.allowed_mask(e, support)
                for e in range(len(problem.events))
            ):
                return problem.region_at(support)
        return None
    event_pos = problem.event_pos[atom.event]
    state_pos = problem.state_pos[atom.state]
    if problem.enabled_mask[event_pos] & problem.state_bit(state_pos):
        raise ValueError(
            f"event {atom.event!r} occurs at state {atom.state!r}; "
            "nothing to inhibit"
        )
    if engine_name == "sat":
        status, region = _SatContext(problem).solve_inhibit(
            event_pos, state_pos, deadline
        )
        if status == "unknown":
            raise ResourceExhausted("budget exhausted")
        return region
    state_bit = problem.state_bit(state_pos)
    for support in range(1 << problem.n):
        if deadline is not None and support % 1024 == 0:
            if time.monotonic() > deadline:
                raise ResourceExhausted("budget exhausted")
        bit_value = 1 if support & state_bit else 0
        partial_mask = problem.allowed_mask(event_pos, support) & _PARTIAL_MASK_AT[
            bit_value
        ]
        if not partial_mask:
            continue
        if all(
            problem.allowed_mask(e, support) for e in range(len(problem.events))
        ):
            forced = {event_pos: problem.first_of_mask(partial_mask)}
            return problem.region_at(support, forced)
    return None


def enumerate_inhibiting_regions(
    subject: Subject,
    tau: NetType,
    event: str,
    state: str,
    *,
    limit: Optional[int] = None,
    engine: str = "auto",
    budget: Optional[float] = None,
) -> list[Region]:
    """Support-distinct regions inhibiting ``event`` at ``state``.

    The exhaustive engine yields them in ascending support order; the
    propositional engine in solver order (one per support, excluded via
    blocking clauses). The propositional engine requires ``limit``.
    """
    problem = _Problem(subject, tau)
    engine_name = _resolve_engine(engine, problem)
    deadline = _deadline_from_budget(budget)
    event_pos = problem.event_pos[event]
    state_pos = problem.state_pos[state]
    if problem.enabled_mask[event_pos] & problem.state_bit(state_pos):
        raise ValueError(
            f"event {event!r} occurs at state {state!r}; nothing to inhibit"
        )
    if limit is not None and limit <= 0:
        return []
    found: list[Region] = []
    if engine_name == "exhaustive":
        state_bit = problem.state_bit(state_pos)
        for support in range(1 << problem.n):
            if deadline is not None and support % 1024 == 0:
                if time.monotonic() > deadline:
                    raise ResourceExhausted("budget exhausted")
            bit_value = 1 if support & state_bit else 0
            partial_mask = problem.allowed_mask(
                event_pos, support
            ) & _PARTIAL_MASK_AT[bit_value]
            if not partial_mask:
                continue
            if not all(
                problem.allowed_mask(e, support)
                for e in range(len(problem.events))
            ):
                continue
            forced = {event_pos: problem.first_of_mask(partial_mask)}
            found.append(problem.region_at(support, forced))
            if limit is not None and len(found) >= limit:
                break
        return found
    if limit is None:
        raise ValueError(
            "the propositional engine needs an explicit limit for enumeration"
        )
    ctx = _SatContext(problem)
    sup = ctx.sup_var[state_pos]
    for interaction in problem.partials:
        sel = ctx.sel_var[(event_pos, interaction)]
        bit_value = _undefined_bit(interaction)
        while len(found) < limit:
            verdict = ctx.solver.solve(
                (sel, _support_literal(sup, bit_value)), deadline=deadline
            )
            if verdict is None:
                raise ResourceExhausted("budget exhausted")
            if not verdict:
                break
            region = ctx.decode({event_pos: interaction})
            found.append(region)
            ctx.block_support()
        if limit is not None and len(found) >= limit:
            break
    return found


def assign_witnesses(
    subject: Subject,
    tau: NetType,
    regions: Sequence[Region],
    *,
    want_ssp: bool = True,
    want_essp: bool = True,
) -> list[tuple[Atom, Region]]:
    """Pair every separation requirement with the first region in ``regions``
    that settles it, in canonical atom order.

    Replays the same greedy coverage the checkers use, so feeding a check's
    region pool back in yields one record per requirement the pool settles;
    requirements no region settles are silently omitted (that is the failing
    or inconclusive case).
    """
    problem = _Problem(subject, tau)
    n = problem.n
    assigned: dict[Atom, Region] = {}
    if want_ssp:
        blocks = problem.initial_blocks()
        for region in regions:
            if not blocks:
                break
            support_int = problem.support_int_of(region)
            out: list[int] = []
            for block in blocks:
                ones = block & support_int
                zeros = block & ~support_int
                if not ones or not zeros:
                    out.append(block)
                    continue
                ones_rest = ones
                while ones_rest:
                    low_one = ones_rest & -ones_rest
                    ones_rest ^= low_one
                    pos_one = n - low_one.bit_length()
                    zeros_rest = zeros
                    while zeros_rest:
                        low_zero = zeros_rest & -zeros_rest
                        zeros_rest ^= low_zero
                        pos_zero = n - low_zero.bit_length()
                        i, j = sorted((pos_one, pos_zero))
                        atom = StatePairAtom(problem.states[i], problem.states[j])
                        assigned[atom] = region
                if ones & (ones - 1):
                    out.append(ones)
                if zeros & (zeros - 1):
                    out.append(zeros)
            blocks = out
    if want_essp:
        full = problem.full
        uncovered = [~mask & full for mask in problem.enabled_mask]
        remaining = sum(1 for mask in uncovered if mask)
        for region in regions:
            if not remaining:
                break
            support_int = problem.support_int_of(region)
            inverse = ~support_int & full
            for e, event in enumerate(problem.events):
                if not uncovered[e]:
                    continue
                interaction = region.signature[event]
                if not interaction.is_partial:
                    continue
                mask = support_int if _undefined_bit(interaction) == 1 else inverse
                newly = uncovered[e] & mask
                while newly:
                    low = newly & -newly
                    newly ^= low
                    pos = n - low.bit_length()
                    assigned[EventStateAtom(event, problem.states[pos])] = region
                uncovered[e] &= ~mask
                if not uncovered[e]:
                    remaining -= 1
    ordered: list[tuple[Atom, Region]] = []
    if want_ssp:
        for pair_atom in ssp_atoms(subject):
            found = assigned.get(pair_atom)
            if found is not None:
                ordered.append((pair_atom, found))
    if want_essp:
        for inhibit_atom in essp_atoms(subject):
            found = assigned.get(inhibit_atom)
            if found is not None:
                ordered.append((inhibit_atom, found))
    return ordered


# --------------------------------------------------------------- CNF bridge


@dataclass(frozen=True)
class CnfEncoding:
    """A requirement compiled to DIMACS CNF, with the variable glossary
    needed to decode a satisfying assignment back into a region."""

    subject: Subject
    tau: NetType
    atom: Atom
    variables: tuple[str, ...]
    clauses: tuple[tuple[int, ...], ...]

    @property
    def text(self) -> str:
        lines = [f"p cnf {len(self.variables)} {len(self.clauses)}"]
        lines.extend(
            f"c {idx + 1} {name}" for idx, name in enumerate(self.variables)
        )
        lines.extend(
            " ".join(str(lit) for lit in clause) + " 0" for clause in self.clauses
        )
        return "\n".join(lines) + "\n"

    def decode(self, assignment: Sequence[bool]) -> Region:
        """Region encoded by a satisfying assignment (index i = variable
        i+1). The result is re-validated and settles the atom."""
        problem = _Problem(self.subject, self.tau)
        values: dict[str, bool] = {
            name: bool(assignment[idx]) for idx, name in enumerate(self.variables)
        }
        support = {s: int(values[f"sup:{s}"]) for s in problem.states}
        forced: dict[int, Interaction] = {}
        if isinstance(self.atom, EventStateAtom):
            event_pos = problem.event_pos[self.atom.event]
            for interaction in problem.partials:
                name = f"pick:{self.atom.event}:{interaction.name.lower()}"
                if values.get(name):
                    forced[event_pos] = interaction
                    break
        signature: dict[str, Interaction] = {}
        for event_pos, event in enumerate(problem.events):
            if event_pos in forced:
                signature[event] = forced[event_pos]
                continue
            for interaction in problem.tau_list:
                if values[f"sel:{event}:{interaction.name.lower()}"]:
                    signature[event] = interaction
                    break
            else:
                raise ValueError("assignment selects no interaction")
        region = Region(support=support, signature=signature)
        if not validate_region(self.subject, self.tau, region):
            raise ValueError("assignment decodes to an inadmissible region")
        return region


def encode_atom_cnf(subject: Subject, tau: NetType, atom: Atom) -> CnfEncoding:
    """Compile 'some admissible region settles this requirement' to CNF."""
    problem = _Problem(subject, tau)
    variables: list[str] = []
    sup_var: list[int] = [0] * problem.n
    for pos in sorted(range(problem.n), key=lambda p: problem.states[p]):
        variables.append(f"sup:{problem.states[pos]}")
        sup_var[pos] = len(variables)
    sel_var: dict[tuple[int, Interaction], int] = {}
    for event_pos in sorted(
        range(len(problem.events)), key=lambda p: problem.events[p]
    ):
        for interaction in problem.tau_list:
            variables.append(
                f"sel:{problem.events[event_pos]}:{interaction.name.lower()}"
            )
            sel_var[(event_pos, interaction)] = len(variables)
    clauses: list[tuple[int, ...]] = [
        tuple(c) for c in _consistency_clauses(problem, sup_var, sel_var)
    ]
    if isinstance(atom, StatePairAtom):
        a = sup_var[problem.state_pos[atom.first]]
        b = sup_var[problem.state_pos[atom.second]]
        clauses.append((a, b))
        clauses.append((-a, -b))
    else:
        event_pos = problem.event_pos[atom.event]
        sup = sup_var[problem.state_pos[atom.state]]
        picks: list[int] = []
        for interaction in problem.partials:
            variables.append(f"pick:{atom.event}:{interaction.name.lower()}")
            aux = len(variables)
            picks.append(aux)
            clauses.append((-aux, sel_var[(event_pos, interaction)]))
            clauses.append(
                (-aux, _support_literal(sup, _undefined_bit(interaction)))
            )
        clauses.append(tuple(picks))  # empty when the type is total: UNSAT
    return CnfEncoding(
        subject=subject,
        tau=tau,
        atom=atom,
        variables=tuple(variables),
        clauses=tuple(clauses),
    )
