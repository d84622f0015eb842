"""A small CDCL SAT solver.

Clauses are lists of non-zero integers in the DIMACS convention
(``v`` / ``-v``).  The solver does watched-literal unit propagation,
first-UIP clause learning with activity-driven branching, phase saving,
and Luby-sequence restarts.  Runs are deterministic for a fixed seed;
seed 0 (the default) starts every variable with a negative phase, any
other seed randomizes the initial phases.

`solve` returns True (satisfiable), False (unsatisfiable), or None if
the conflict budget ran out first.
"""

from __future__ import annotations

import random
from typing import Iterable, Optional

_RESTART_UNIT = 100


def _luby(i: int) -> int:
    """The i-th element (1-based) of the Luby restart sequence."""
    k = 1
    while (1 << (k + 1)) - 1 <= i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << k) - 1
        k = 1
        while (1 << (k + 1)) - 1 <= i:
            k += 1
    return 1 << (k - 1)


class SatSolver:
    """One-shot CDCL solver over integer literals."""

    def __init__(self, seed: int = 0,
                 conflict_budget: Optional[int] = None):
        self._seed = seed
        self._budget = conflict_budget
        self.num_vars = 0
        self.conflicts = 0
        # Indexed by literal code 2*v (positive) / 2*v+1 (negative).
        self._watches: list[list[list[int]]] = [[], []]
        self._clauses: list[list[int]] = []
        self._assign: list[int] = [0]    # var -> 0 unset, 1 true, -1 false
        self._level: list[int] = [0]
        self._reason: list[Optional[list[int]]] = [None]
        self._phase: list[bool] = [False]
        self._activity: list[float] = [0.0]
        self._act_inc = 1.0
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._unsat = False
        self._rng = random.Random(seed) if seed else None

    # ------------------------------------------------------------------
    # Problem construction

    def new_var(self) -> int:
        self.num_vars += 1
        self._assign.append(0)
        self._level.append(0)
        self._reason.append(None)
        phase = self._rng.random() < 0.5 if self._rng else False
        self._phase.append(phase)
        self._activity.append(0.0)
        self._watches.append([])
        self._watches.append([])
        return self.num_vars

    @staticmethod
    def _code(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _lit_value(self, lit: int) -> int:
        v = self._assign[abs(lit)]
        return v if lit > 0 else -v

    def add_clause(self, lits: Iterable[int]) -> None:
        """Add a clause; duplicate literals are merged and tautologies
        dropped.  Only valid before `solve`."""
        seen: set[int] = set()
        clause: list[int] = []
        for lit in lits:
            assert lit != 0 and abs(lit) <= self.num_vars, f"bad literal {lit}"
            if -lit in seen:
                return  # tautology
            if lit not in seen:
                seen.add(lit)
                clause.append(lit)
        if not clause:
            self._unsat = True
            return
        if len(clause) == 1:
            lit = clause[0]
            val = self._lit_value(lit)
            if val < 0:
                self._unsat = True
            elif val == 0:
                self._enqueue(lit, None)
            return
        self._clauses.append(clause)
        self._watch(clause)

    def _watch(self, clause: list[int]) -> None:
        self._watches[self._code(-clause[0])].append(clause)
        self._watches[self._code(-clause[1])].append(clause)

    # ------------------------------------------------------------------
    # Trail

    def _enqueue(self, lit: int, reason: Optional[list[int]]) -> None:
        var = abs(lit)
        self._assign[var] = 1 if lit > 0 else -1
        self._level[var] = len(self._trail_lim)
        self._reason[var] = reason
        self._trail.append(lit)

    def _propagate(self) -> Optional[list[int]]:
        """Exhaust unit propagation; return a conflicting clause or None."""
        while self._qhead < len(self._trail):
            lit = self._trail[self._qhead]
            self._qhead += 1
            watch_list = self._watches[self._code(lit)]
            kept: list[list[int]] = []
            for ci in range(len(watch_list)):
                clause = watch_list[ci]
                # Ensure the falsified literal sits at position 1.
                if clause[0] == -lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self._lit_value(first) > 0:
                    kept.append(clause)
                    continue
                for k in range(2, len(clause)):
                    if self._lit_value(clause[k]) >= 0:
                        clause[1], clause[k] = clause[k], clause[1]
                        self._watches[self._code(-clause[1])].append(clause)
                        break
                else:
                    kept.append(clause)
                    if self._lit_value(first) < 0:
                        kept.extend(watch_list[ci + 1:])
                        self._watches[self._code(lit)] = kept
                        return clause
                    self._enqueue(first, clause)
            self._watches[self._code(lit)] = kept
        return None

    # ------------------------------------------------------------------
    # Conflict analysis

    def _bump(self, var: int) -> None:
        self._activity[var] += self._act_inc
        if self._activity[var] > 1e100:
            for v in range(1, self.num_vars + 1):
                self._activity[v] *= 1e-100
            self._act_inc *= 1e-100

    def _analyze(self, conflict: list[int]) -> tuple[list[int], int]:
        """First-UIP learning; returns (learned clause, backjump level)."""
        level = len(self._trail_lim)
        seen = [False] * (self.num_vars + 1)
        learned: list[int] = [0]  # slot 0 for the asserting literal
        counter = 0
        lit = None
        reason: Optional[list[int]] = conflict
        idx = len(self._trail) - 1
        while True:
            assert reason is not None
            for q in reason:
                if q == lit:
                    continue
                var = abs(q)
                if not seen[var] and self._level[var] > 0:
                    seen[var] = True
                    self._bump(var)
                    if self._level[var] == level:
                        counter += 1
                    else:
                        learned.append(q)
            while not seen[abs(self._trail[idx])]:
                idx -= 1
            lit = self._trail[idx]
            var = abs(lit)
            seen[var] = False
            idx -= 1
            counter -= 1
            if counter == 0:
                learned[0] = -lit
                break
            reason = self._reason[var]
        if len(learned) == 1:
            return learned, 0
        back = max(self._level[abs(q)] for q in learned[1:])
        pos = max(range(1, len(learned)),
                  key=lambda k: self._level[abs(learned[k])])
        learned[1], learned[pos] = learned[pos], learned[1]
        return learned, back

    def _backtrack(self, level: int) -> None:
        while len(self._trail_lim) > level:
            mark = self._trail_lim.pop()
            for lit in reversed(self._trail[mark:]):
                var = abs(lit)
                self._phase[var] = lit > 0
                self._assign[var] = 0
                self._reason[var] = None
            del self._trail[mark:]
        self._qhead = min(self._qhead, len(self._trail))

    # ------------------------------------------------------------------
    # Search

    def _decide(self) -> int:
        best, best_act = 0, -1.0
        for var in range(1, self.num_vars + 1):
            if self._assign[var] == 0 and self._activity[var] > best_act:
                best, best_act = var, self._activity[var]
        return best

    def solve(self) -> Optional[bool]:
        if self._unsat:
            return False
        restart_count = 0
        limit = _luby(1) * _RESTART_UNIT
        since_restart = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.conflicts += 1
                since_restart += 1
                if self._budget is not None and self.conflicts > self._budget:
                    return None
                if not self._trail_lim:
                    return False
                learned, back = self._analyze(conflict)
                self._backtrack(back)
                if len(learned) > 1:
                    self._clauses.append(learned)
                    self._watch(learned)
                self._enqueue(learned[0], learned if len(learned) > 1 else None)
                self._act_inc /= 0.95
                continue
            if since_restart >= limit and self._trail_lim:
                restart_count += 1
                since_restart = 0
                limit = _luby(restart_count + 1) * _RESTART_UNIT
                self._backtrack(0)
                continue
            var = self._decide()
            if var == 0:
                return True
            self._trail_lim.append(len(self._trail))
            self._enqueue(var if self._phase[var] else -var, None)

    def value(self, var: int) -> bool:
        """Assignment of ``var`` after a True `solve` result."""
        assert self._assign[var] != 0, f"variable {var} is unassigned"
        return self._assign[var] > 0
