"""A small deterministic CDCL satisfiability solver.

Implements just what the propositional region engine needs: incremental
clause addition, solving under assumptions, watched literals with a binary
fast path, first-UIP clause learning, activity-based decisions with index
tie-breaking, phase saving, and Luby restarts. No randomness anywhere, so
runs are reproducible.

Literal convention: DIMACS-style nonzero ints at the API boundary
(``v``/``-v``), mapped internally to ``2v`` (positive) / ``2v + 1``
(negative). ``watches[lit]`` holds the long clauses currently watching
``lit``; ``bins[lit]`` holds the partner literals of binary clauses
containing ``lit``. Both fire when ``lit`` becomes false.
"""

from __future__ import annotations

import heapq
import time
from typing import Iterable, Optional, Sequence

_FALSE = 0
_TRUE = 1
_UNDEF = 2


def _luby(i: int) -> int:
    """The i-th element (1-based) of the Luby restart sequence."""
    k = 1
    while (1 << (k + 1)) - 1 <= i:
        k += 1
    while (1 << k) - 1 != i:
        i -= (1 << k) - 1
        k = 1
        while (1 << (k + 1)) - 1 <= i:
            k += 1
    return 1 << (k - 1)


class SatSolver:
    """Incremental CDCL solver over DIMACS-style integer literals."""

    def __init__(self) -> None:
        self._nvars = 0
        self._val = bytearray((_UNDEF, _UNDEF))  # indexed by internal literal
        self._level: list[int] = [0]
        self._reason: list[Optional[tuple[int, ...]]] = [None]
        self._activity: list[float] = [0.0]
        self._phase = bytearray(1)
        self._watches: list[list[list[int]]] = [[], []]
        self._bins: list[list[int]] = [[], []]
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._heap: list[tuple[float, int]] = []
        self._var_inc = 1.0
        self._ok = True
        self._n_conflicts = 0
        self._model = b""

    # ------------------------------------------------------------------ api

    def new_var(self) -> int:
        self._nvars += 1
        self._val.extend((_UNDEF, _UNDEF))
        self._level.append(0)
        self._reason.append(None)
        self._activity.append(0.0)
        self._phase.append(0)
        self._watches.extend(([], []))
        self._bins.extend(([], []))
        heapq.heappush(self._heap, (0.0, self._nvars))
        return self._nvars

    def ensure_vars(self, count: int) -> None:
        while self._nvars < count:
            self.new_var()

    @property
    def num_vars(self) -> int:
        return self._nvars

    @property
    def conflicts(self) -> int:
        return self._n_conflicts

    def add_clause(self, lits: Iterable[int]) -> None:
        """Add a clause of DIMACS literals (the solver first backtracks to
        level 0, so adding clauses between ``solve`` calls is safe)."""
        self._backtrack(0)
        internal: list[int] = []
        seen: set[int] = set()
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")
            var = abs(lit)
            self.ensure_vars(var)
            ilit = var * 2 + (0 if lit > 0 else 1)
            if ilit ^ 1 in seen:
                return  # tautology
            if ilit in seen:
                continue
            value = self._val[ilit]
            if value == _TRUE:
                return  # already satisfied at level 0
            if value == _FALSE:
                continue  # falsified at level 0: drop the literal
            seen.add(ilit)
            internal.append(ilit)
        if not self._ok:
            return
        if not internal:
            self._ok = False
            return
        if len(internal) == 1:
            self._enqueue(internal[0], None)
            if self._propagate() is not None:
                self._ok = False
            return
        if len(internal) == 2:
            a, b = internal
            self._bins[a].append(b)
            self._bins[b].append(a)
            return
        self._watches[internal[0]].append(internal)
        self._watches[internal[1]].append(internal)

    def solve(
        self,
        assumptions: Sequence[int] = (),
        deadline: Optional[float] = None,
        conflict_budget: Optional[int] = None,
    ) -> Optional[bool]:
        """True = satisfiable, False = unsatisfiable (under assumptions),
        None = budget exhausted before reaching a verdict."""
        if not self._ok:
            return False
        if deadline is not None and time.monotonic() > deadline:
            return None
        self._backtrack(0)
        if self._propagate() is not None:
            self._ok = False
            return False
        assume: list[int] = []
        for lit in assumptions:
            var = abs(lit)
            self.ensure_vars(var)
            assume.append(var * 2 + (0 if lit > 0 else 1))
        budget_start = self._n_conflicts
        restart_count = 0
        limit = 32 * _luby(1)
        conflicts_here = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self._n_conflicts += 1
                conflicts_here += 1
                if self._decision_level() == 0:
                    self._ok = False
                    return False
                learnt, back_level = self._analyze(conflict)
                self._backtrack(back_level)
                self._record_learnt(learnt)
                self._var_inc /= 0.95
                if self._var_inc > 1e100:
                    self._rescale_activity()
                if conflict_budget is not None and (
                    self._n_conflicts - budget_start
                ) >= conflict_budget:
                    return None
                if deadline is not None and self._n_conflicts % 64 == 0:
                    if time.monotonic() > deadline:
                        return None
                if conflicts_here >= limit:
                    restart_count += 1
                    limit = 32 * _luby(restart_count + 1)
                    conflicts_here = 0
                    self._backtrack(0)
                continue
            lvl = self._decision_level()
            if lvl < len(assume):
                lit = assume[lvl]
                value = self._val[lit]
                if value == _FALSE:
                    return False
                self._trail_lim.append(len(self._trail))
                if value == _UNDEF:
                    self._enqueue(lit, None)
                continue
            if len(self._trail) == self._nvars:
                self._model = bytes(self._val)
                return True
            var = self._pick_branch_var()
            lit = var * 2 + (self._phase[var] ^ 1)
            self._trail_lim.append(len(self._trail))
            self._enqueue(lit, None)

    def model_value(self, var: int) -> bool:
        """Truth of ``var`` in the most recent satisfying assignment."""
        return self._model[var * 2] == _TRUE

    def model(self) -> list[bool]:
        return [self.model_value(v) for v in range(1, self._nvars + 1)]

    def verify_model(self, clauses: Iterable[Sequence[int]]) -> bool:
        """Check the last model against an iterable of DIMACS clauses."""
        model = self._model
        for clause in clauses:
            for lit in clause:
                ilit = abs(lit) * 2 + (0 if lit > 0 else 1)
                if model[ilit] == _TRUE:
                    break
            else:
                return False
        return True

    # ------------------------------------------------------------ internals

    def _decision_level(self) -> int:
        return len(self._trail_lim)

    def _enqueue(self, lit: int, reason: Optional[tuple[int, ...]]) -> None:
        self._val[lit] = _TRUE
        self._val[lit ^ 1] = _FALSE
        var = lit >> 1
        self._level[var] = self._decision_level()
        self._reason[var] = reason
        self._phase[var] = 1 - (lit & 1)
        self._trail.append(lit)

    def _propagate(self) -> Optional[tuple[int, ...]]:
        val = self._val
        bins = self._bins
        watches = self._watches
        trail = self._trail
        while self._qhead < len(trail):
            p = trail[self._qhead]
            self._qhead += 1
            falsified = p ^ 1
            for implied in bins[falsified]:
                v = val[implied]
                if v == _FALSE:
                    return (implied, falsified)
                if v == _UNDEF:
                    self._enqueue(implied, (implied, falsified))
            watch_list = watches[falsified]
            write = 0
            read = 0
            size = len(watch_list)
            while read < size:
                clause = watch_list[read]
                read += 1
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if val[first] == _TRUE:
                    watch_list[write] = clause
                    write += 1
                    continue
                moved = False
                for k in range(2, len(clause)):
                    lk = clause[k]
                    if val[lk] != _FALSE:
                        clause[1], clause[k] = lk, falsified
                        watches[lk].append(clause)
                        moved = True
                        break
                if moved:
                    continue
                watch_list[write] = clause
                write += 1
                if val[first] == _FALSE:
                    del watch_list[write:read]
                    return tuple(clause)
                self._enqueue(first, tuple(clause))
            del watch_list[write:]
        return None

    def _analyze(self, conflict: tuple[int, ...]) -> tuple[list[int], int]:
        learnt: list[int] = [0]
        seen: set[int] = set()
        counter = 0
        level = self._decision_level()
        reason: Sequence[int] = conflict
        skip: Optional[int] = None
        idx = len(self._trail) - 1
        bump = self._bump_activity
        while True:
            for lit in reason:
                if lit == skip:
                    continue
                var = lit >> 1
                if var in seen:
                    continue
                lit_level = self._level[var]
                if lit_level == 0:
                    continue
                seen.add(var)
                bump(var)
                if lit_level == level:
                    counter += 1
                else:
                    learnt.append(lit)
            while self._trail[idx] >> 1 not in seen:
                idx -= 1
            uip = self._trail[idx]
            idx -= 1
            seen.discard(uip >> 1)
            counter -= 1
            if counter == 0:
                learnt[0] = uip ^ 1
                break
            reason = self._reason[uip >> 1] or ()
            skip = uip
        if len(learnt) == 1:
            return learnt, 0
        back = max(self._level[lit >> 1] for lit in learnt[1:])
        # keep a literal of the backjump level in the second watch slot
        for k in range(1, len(learnt)):
            if self._level[learnt[k] >> 1] == back:
                learnt[1], learnt[k] = learnt[k], learnt[1]
                break
        return learnt, back

    def _record_learnt(self, learnt: list[int]) -> None:
        if len(learnt) == 1:
            self._enqueue(learnt[0], None)
            return
        if len(learnt) == 2:
            a, b = learnt
            self._bins[a].append(b)
            self._bins[b].append(a)
            self._enqueue(a, (a, b))
            return
        self._watches[learnt[0]].append(learnt)
        self._watches[learnt[1]].append(learnt)
        self._enqueue(learnt[0], tuple(learnt))

    def _backtrack(self, target_level: int) -> None:
        if self._decision_level() <= target_level:
            return
        boundary = self._trail_lim[target_level]
        for lit in reversed(self._trail[boundary:]):
            self._val[lit] = _UNDEF
            self._val[lit ^ 1] = _UNDEF
            var = lit >> 1
            self._reason[var] = None
            heapq.heappush(self._heap, (-self._activity[var], var))
        del self._trail[boundary:]
        del self._trail_lim[target_level:]
        self._qhead = len(self._trail)

    def _bump_activity(self, var: int) -> None:
        self._activity[var] += self._var_inc
        if self._val[var * 2] == _UNDEF:
            heapq.heappush(self._heap, (-self._activity[var], var))

    def _rescale_activity(self) -> None:
        self._activity = [a * 1e-100 for a in self._activity]
        self._var_inc *= 1e-100
        self._heap = []
        for var in range(1, self._nvars + 1):
            if self._val[var * 2] == _UNDEF:
                heapq.heappush(self._heap, (-self._activity[var], var))

    def _pick_branch_var(self) -> int:
        heap = self._heap
        activity = self._activity
        val = self._val
        while heap:
            neg_act, var = heapq.heappop(heap)
            if val[var * 2] == _UNDEF and -neg_act == activity[var]:
                return var
        for var in range(1, self._nvars + 1):
            if val[var * 2] == _UNDEF:
                return var
        raise AssertionError("no unassigned variable to branch on")
