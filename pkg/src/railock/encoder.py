"""Step-unrolled CNF encoding of the route allocation transition system.

Variables per step: one-hot occupancy occ[route][train], a finished flag
per train, and (when progress constraints are enabled) an action variable
per (train, route) defined as "newly occupied this step".  Step 0 is the
known initial state and contributes constants, not variables.

Constraint groups per step, in emission order: path consistency (single
route per start delimiter, new routes extend an occupied one), conflict
exclusion, atomic elementary-route allocation, forced release via the
recursive freeable condition, per-route one-hot, finished-flag setting,
then optionally the global progress clause and the maximal progress
(earliest-allocation) clauses.
"""

from __future__ import annotations

from .dynamics import route_freeable
from .model import ProblemInstance, RouteId, TrainId
from .sat import SolverHandle

# Constant formula values used alongside variable literals.
TRUE = "true"
FALSE = "false"


class EncodingSession:
    def __init__(
        self,
        inst: ProblemInstance,
        solver: SolverHandle,
        with_progress: bool = False,
        with_maximal_progress: bool = False,
    ):
        self.inst = inst
        self.solver = solver
        self.with_progress = with_progress
        self.with_maximal_progress = with_maximal_progress
        self.use_actions = with_progress or with_maximal_progress
        self.nvars = 0
        self.num_steps = 0
        self.occ: dict[tuple[int, RouteId, TrainId], int] = {}
        self.fin: dict[tuple[int, TrainId], int] = {}
        self.act: dict[tuple[int, TrainId, RouteId], int] = {}
        self.varinfo: dict[int, tuple] = {}
        self.clauses: list[list[int]] = []
        self.clauses_per_step: list[int] = [0]
        self._initial_occ = {
            (r, t.id): True for t in inst.trains for r in t.initial
        }
        self._freeable_memo: dict[tuple, int | str] = {}

    # -- variable and clause plumbing ------------------------------------

    def _new_var(self, info: tuple) -> int:
        self.nvars += 1
        self.varinfo[self.nvars] = info
        return self.nvars

    def _emit(self, lits: list[int]) -> None:
        self.clauses.append(lits)
        self.clauses_per_step[-1] += 1
        self.solver.add_clause(lits)

    def occ0(self, r: RouteId, t: TrainId) -> bool:
        return (r, t) in self._initial_occ

    def _amo(self, lits: list[int], info: tuple) -> None:
        """At most one: pairwise for small sets, sequential counter above."""
        if len(lits) <= 1:
            return
        if len(lits) <= 5:
            for i, a in enumerate(lits):
                for b in lits[i + 1:]:
                    self._emit([-a, -b])
            return
        regs = [self._new_var(info + ("amo", k)) for k in range(len(lits) - 1)]
        self._emit([-lits[0], regs[0]])
        for k in range(1, len(lits) - 1):
            self._emit([-lits[k], regs[k]])
            self._emit([-regs[k - 1], regs[k]])
            self._emit([-lits[k], -regs[k - 1]])
        self._emit([-lits[-1], -regs[-1]])

    # -- freeable formula -------------------------------------------------

    def freeable_formula(self, t: TrainId, r: RouteId, l: float, step: int) -> int | str:
        """Tseitin literal for the recursive release condition at ``step``.

        Returns TRUE/FALSE for constant outcomes, otherwise an auxiliary
        variable defined to be equivalent to the formula.  Memoized per
        (step, train, route, residual length).
        """
        infra = self.inst.infrastructure
        route = infra.proutes[r]
        if route.exit is None or l <= 0:
            return TRUE
        key = (step, t, r, round(l, 9))
        if key in self._freeable_memo:
            return self._freeable_memo[key]
        terms: list[int] = []
        for b in infra.next_routes(route):
            child = self.freeable_formula(t, b.id, l - route.length, step)
            if child is FALSE:
                continue
            occ_b = self.occ[(step, b.id, t)]
            if child is TRUE:
                terms.append(occ_b)
            else:
                c = self._new_var((step, "freeable-term", t, b.id, round(l, 9)))
                self._emit([-c, occ_b])
                self._emit([-c, child])
                self._emit([c, -occ_b, -child])
                terms.append(c)
        if not terms:
            self._freeable_memo[key] = FALSE
            return FALSE
        f = self._new_var((step, "freeable", t, r, round(l, 9)))
        self._emit([-f] + terms)
        for tau in terms:
            self._emit([f, -tau])
        self._freeable_memo[key] = f
        return f

    # -- step construction -------------------------------------------------

    def extend_step(self) -> int:
        inst, infra = self.inst, self.inst.infrastructure
        i = self.num_steps + 1
        self.num_steps = i
        self.clauses_per_step.append(0)
        trains = inst.trains
        route_ids = sorted(infra.proutes)

        for r in route_ids:
            for t in trains:
                self.occ[(i, r, t.id)] = self._new_var((i, "occ", t.id, r))
        for t in trains:
            self.fin[(i, t.id)] = self._new_var((i, "finished", t.id, None))
        if self.use_actions:
            for t in trains:
                for r in route_ids:
                    a = self._new_var((i, "action", t.id, r))
                    self.act[(i, t.id, r)] = a
                    o = self.occ[(i, r, t.id)]
                    if i == 1:
                        if self.occ0(r, t.id):
                            self._emit([-a])
                        else:
                            self._emit([-a, o])
                            self._emit([a, -o])
                    else:
                        op = self.occ[(i - 1, r, t.id)]
                        self._emit([-a, -op])
                        self._emit([-a, o])
                        self._emit([a, op, -o])

        # C1: at most one route out of each delimiter, per train.
        for t in trains:
            for d in sorted(infra.delimiters):
                group = [self.occ[(i, r.id, t.id)] for r in infra.successors(d)]
                self._amo(group, (i, "c1", t.id, d))

        # C2: new routes must extend an occupied route.
        for t in trains:
            for r in route_ids:
                route = infra.proutes[r]
                preds = (
                    [] if route.entry is None
                    else [b for b in infra.proutes.values() if b.exit == route.entry]
                )
                ext = [self.occ[(i, b.id, t.id)] for b in sorted(preds, key=lambda b: b.id)]
                self._emit_action_implies(i, t.id, r, ext)

        # C3: conflicting routes are not both occupied.
        for a, b in infra.conflict_pairs():
            for t in trains:
                for u in trains:
                    self._emit([-self.occ[(i, a, t.id)], -self.occ[(i, b, u.id)]])

        # C4: elementary routes allocate as a unit.
        for t in trains:
            for e in sorted(infra.eroutes.values(), key=lambda e: e.id):
                for r in e.parts:
                    for other in e.parts:
                        if other != r:
                            self._emit_action_implies(
                                i, t.id, r, [self.occ[(i, other, t.id)]]
                            )

        # C5: forced release exactly when the freeable condition holds,
        # evaluated on the previous step's occupancy.
        for t in trains:
            for r in route_ids:
                o = self.occ[(i, r, t.id)]
                if i == 1:
                    if not self.occ0(r, t.id):
                        continue
                    f0 = route_freeable(
                        infra, {rr: tt for (rr, tt), _ in self._initial_occ.items()},
                        t.id, r, t.length,
                    )
                    self._emit([-o] if f0 else [o])
                else:
                    op = self.occ[(i - 1, r, t.id)]
                    f = self.freeable_formula(t.id, r, t.length, i - 1)
                    if f is TRUE:
                        self._emit([-op, -o])
                    elif f is FALSE:
                        self._emit([-op, o])
                    else:
                        self._emit([-op, o, f])
                        self._emit([-op, -o, -f])

        # One-hot: at most one train per route.
        for r in route_ids:
            self._amo([self.occ[(i, r, t.id)] for t in trains], (i, "onehot", None, r))

        # C6: finishing requires visiting a final route; finished is sticky.
        for t in trains:
            fi = self.fin[(i, t.id)]
            finals = [self.occ[(i, r, t.id)] for r in sorted(t.final)]
            if i == 1:
                self._emit([-fi] + finals)
            else:
                fp = self.fin[(i - 1, t.id)]
                self._emit([fp, -fi] + finals)
                self._emit([-fp, fi])

        if self.with_progress:
            self._emit([self.act[(i, t.id, r)] for t in trains for r in route_ids])

        if self.with_maximal_progress and i >= 2:
            self._emit_maximal_progress(i)

        return i

    def _emit_action_implies(self, i: int, t: TrainId, r: RouteId, consequent: list[int]) -> None:
        """Clause for: action a_{t,r} at step i implies the consequent."""
        o = self.occ[(i, r, t)]
        if self.use_actions:
            self._emit([-self.act[(i, t, r)]] + consequent)
        elif i == 1:
            if not self.occ0(r, t):
                self._emit([-o] + consequent)
        else:
            self._emit([self.occ[(i - 1, r, t)], -o] + consequent)

    def _emit_maximal_progress(self, i: int) -> None:
        """Allocations must happen at the earliest unblocked step.

        If train t newly takes route r at step i although a connecting
        route was already held at i-1, some route conflicting with r's
        elementary route must have been held by another train at i-1.
        """
        infra = self.inst.infrastructure
        for t in self.inst.trains:
            for e in sorted(infra.eroutes.values(), key=lambda e: e.id):
                blockers = sorted({
                    z for y in e.parts for z in infra.conflicts_of(y)
                })
                for r in e.parts:
                    route = infra.proutes[r]
                    if route.entry is None:
                        continue
                    rhs = [
                        self.occ[(i - 1, z, u.id)]
                        for z in blockers
                        for u in self.inst.trains
                        if u.id != t.id
                    ]
                    a = self.act[(i, t.id, r)]
                    for x in infra.proutes.values():
                        if x.exit == route.entry:
                            self._emit([-a, -self.occ[(i - 1, x.id, t.id)]] + rhs)

    # -- queries -----------------------------------------------------------

    def goal_assumptions(self, i: int) -> list[int]:
        return [self.fin[(i, t.id)] for t in self.inst.trains]

    def occupancy(self, model, i: int) -> dict[RouteId, TrainId]:
        """Decode the occupancy map at step i (0 = initial constants)."""
        if i == 0:
            return {r: t for (r, t) in self._initial_occ}
        out = {}
        for r in self.inst.infrastructure.proutes:
            for t in self.inst.trains:
                if model[self.occ[(i, r, t.id)]]:
                    out[r] = t.id
        return out

    def finished_at(self, model, i: int) -> set[TrainId]:
        return {t.id for t in self.inst.trains if model[self.fin[(i, t.id)]]}

    def dump_dimacs(self, fp) -> None:
        """DIMACS with a comment map from variable index to meaning."""
        for v in range(1, self.nvars + 1):
            fp.write(f"c var {v} = {self.varinfo[v]}\n")
        fp.write(f"p cnf {self.nvars} {len(self.clauses)}\n")
        for cl in self.clauses:
            fp.write(" ".join(map(str, cl)) + " 0\n")
