"""Built-in conflict-driven clause learning solver.

Hermetic fallback backend: two watched literals, 1UIP learning, VSIDS-style
decaying activities, phase saving and Luby restarts.  Assumptions are
asserted as forced first decisions, MiniSat style.  Intended for modest
formulas; the bridge backend is preferred for large runs.
"""

from __future__ import annotations

import time


class Cdcl:
    def __init__(self) -> None:
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = {}
        self.values: list[int] = [0]  # 1-indexed; 0 unknown, 1 true, -1 false
        self.level: list[int] = [0]
        self.reason: list[int] = [-1]  # clause index or -1
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.activity: list[float] = [0.0]
        self.phase: list[int] = [0]
        self.var_inc = 1.0
        self.ok = True

    def _ensure_var(self, v: int) -> None:
        while self.nvars < v:
            self.nvars += 1
            self.values.append(0)
            self.level.append(0)
            self.reason.append(-1)
            self.activity.append(0.0)
            self.phase.append(-1)

    def _value(self, lit: int) -> int:
        v = self.values[abs(lit)]
        return v if lit > 0 else -v

    def add_clause(self, lits: list[int]) -> None:
        assert not self.trail_lim, "add_clause only at root level"
        for l in lits:
            self._ensure_var(abs(l))
        # Root-level simplification keeps the watch invariants simple.
        out: list[int] = []
        for l in lits:
            if self._value(l) == 1 or -l in out:
                return
            if self._value(l) == -1 or l in out:
                continue
            out.append(l)
        if not out:
            self.ok = False
            return
        if len(out) == 1:
            if not self._enqueue(out[0], -1) or self._propagate() is not None:
                self.ok = False
            return
        ci = len(self.clauses)
        self.clauses.append(out)
        self.watches.setdefault(out[0], []).append(ci)
        self.watches.setdefault(out[1], []).append(ci)

    def _enqueue(self, lit: int, reason: int) -> bool:
        val = self._value(lit)
        if val == 1:
            return True
        if val == -1:
            return False
        v = abs(lit)
        self.values[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)
        return True

    def _propagate(self) -> list[int] | None:
        """Unit propagation; returns a conflicting clause or None."""
        i = getattr(self, "_qhead", 0)
        while i < len(self.trail):
            lit = self.trail[i]
            i += 1
            false_lit = -lit
            watchlist = self.watches.get(false_lit, [])
            new_list = []
            for k, ci in enumerate(watchlist):
                clause = self.clauses[ci]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                if self._value(clause[0]) == 1:
                    new_list.append(ci)
                    continue
                for j in range(2, len(clause)):
                    if self._value(clause[j]) != -1:
                        clause[1], clause[j] = clause[j], clause[1]
                        self.watches.setdefault(clause[1], []).append(ci)
                        break
                else:
                    new_list.append(ci)
                    if not self._enqueue(clause[0], ci):
                        new_list.extend(watchlist[k + 1:])
                        self.watches[false_lit] = new_list
                        self._qhead = len(self.trail)
                        return clause
            self.watches[false_lit] = new_list
        self._qhead = i
        return None

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.nvars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100

    def _analyze(self, conflict: list[int]) -> tuple[list[int], int]:
        learnt = [0]
        seen = [False] * (self.nvars + 1)
        counter = 0
        lit = 0
        cur_level = len(self.trail_lim)
        index = len(self.trail)
        clause = conflict
        while True:
            for q in clause if lit == 0 else clause[1:]:
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] == cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                index -= 1
                lit = self.trail[index]
                if seen[abs(lit)]:
                    break
            counter -= 1
            seen[abs(lit)] = False
            if counter == 0:
                break
            clause = self.clauses[self.reason[abs(lit)]]
        learnt[0] = -lit
        if len(learnt) == 1:
            return learnt, 0
        back = max(self.level[abs(q)] for q in learnt[1:])
        # Put a literal of the backtrack level in the second watch slot.
        for j in range(1, len(learnt)):
            if self.level[abs(learnt[j])] == back:
                learnt[1], learnt[j] = learnt[j], learnt[1]
                break
        return learnt, back

    def _backtrack(self, level: int) -> None:
        while len(self.trail_lim) > level:
            lim = self.trail_lim.pop()
            for lit in self.trail[lim:]:
                v = abs(lit)
                self.phase[v] = 1 if lit > 0 else -1
                self.values[v] = 0
                self.reason[v] = -1
            del self.trail[lim:]
        self._qhead = min(getattr(self, "_qhead", 0), len(self.trail))

    def _decide_var(self) -> int:
        best, best_act = 0, -1.0
        for v in range(1, self.nvars + 1):
            if self.values[v] == 0 and self.activity[v] > best_act:
                best, best_act = v, self.activity[v]
        return best

    def solve(self, assumptions: list[int] = (), deadline: float | None = None):
        """Returns a model list, False, or None if the deadline passed."""
        try:
            return self._solve(assumptions, deadline)
        finally:
            # Always restore root level so clauses may be added afterwards.
            self._backtrack(0)

    def _solve(self, assumptions: list[int], deadline: float | None):
        if not self.ok:
            return False
        self._backtrack(0)
        for l in assumptions:
            self._ensure_var(abs(l))
        if self._propagate() is not None:
            self.ok = False
            return False
        conflicts = 0
        restart_unit = 64
        limit = restart_unit * _luby(1)
        restarts = 1
        n_assumps = len(assumptions)
        while True:
            conflict = self._propagate()
            if conflict is not None:
                conflicts += 1
                if conflicts % 256 == 0 and deadline is not None and time.monotonic() > deadline:
                    self._backtrack(0)
                    return None
                if len(self.trail_lim) == 0:
                    return False
                learnt, back = self._analyze(conflict)
                self._backtrack(back)
                if len(learnt) == 1:
                    if not self._enqueue(learnt[0], -1):
                        return False
                else:
                    ci = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches.setdefault(learnt[0], []).append(ci)
                    self.watches.setdefault(learnt[1], []).append(ci)
                    self._enqueue(learnt[0], ci)
                self.var_inc /= 0.95
                if conflicts >= limit:
                    restarts += 1
                    limit = conflicts + restart_unit * _luby(restarts)
                    self._backtrack(0)
                continue
            if len(self.trail_lim) < n_assumps:
                a = assumptions[len(self.trail_lim)]
                val = self._value(a)
                if val == -1:
                    return False
                self.trail_lim.append(len(self.trail))
                if val == 0:
                    self._enqueue(a, -1)
                continue
            v = self._decide_var()
            if v == 0:
                model = [False] * (self.nvars + 1)
                for u in range(1, self.nvars + 1):
                    model[u] = self.values[u] == 1
                self._backtrack(0)
                return model
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.phase[v] >= 0 else -v, -1)


def _luby(i: int) -> int:
    """i-th element (1-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    k = i.bit_length()
    if i == (1 << k) - 1:
        return 1 << (k - 1)
    return _luby(i - (1 << (k - 1)) + 1)
