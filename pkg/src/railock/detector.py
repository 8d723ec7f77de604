"""Online deadlock detection by incremental bounded planning.

Three algorithm variants share one incremental encoding session:

  1. Unroll up to a precomputed step bound U and report dead when no
     unrolling up to U reaches the goal.
  2. Add a global progress clause per step (some allocation happens) and
     return dead as soon as the formula itself is unsatisfiable.
  3. Additionally add the maximal progress constraint, which collapses
     plans that differ only in the order of independent allocations.

Verdicts carry the step count at which the decision fell, the wall time
spent, and the algorithm used.  Live verdicts also carry an executable
plan decoded from the satisfying model.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import networkx as nx

from . import dynamics
from .encoder import EncodingSession
from .model import ProblemInstance, RouteId, TrainId
from .sat import Sat, TimedOut, Unsat, make_solver

# One planning step: the set of (train, elementary route) allocations.
PlanStep = list[tuple[TrainId, RouteId]]
Plan = list[PlanStep]


class InternalInconsistency(Exception):
    """The step loop exceeded its sound bound without a decision."""


@dataclass
class Verdict:
    status: str  # "live" | "dead" | "unknown"
    steps: int
    time_s: float
    algorithm: int
    plan: Plan | None = None

    def to_doc(self) -> dict:
        return {
            "status": self.status,
            "steps": self.steps,
            "time_s": round(self.time_s, 6),
            "algorithm": self.algorithm,
        }


@dataclass(frozen=True)
class PartialOrder:
    """Allocation events ordered by train paths and resource conflicts.

    ``relation`` is the full transitive closure, so equality between two
    orders is plain field equality.
    """

    nodes: frozenset[tuple[TrainId, RouteId]]
    relation: frozenset[tuple[tuple[TrainId, RouteId], tuple[TrainId, RouteId]]]

    def reduction(self) -> list[tuple[tuple[TrainId, RouteId], tuple[TrainId, RouteId]]]:
        g = nx.DiGraph(self.relation)
        g.add_nodes_from(self.nodes)
        return sorted(nx.transitive_reduction(g).edges())


def compute_upper_bound(inst: ProblemInstance) -> int:
    """Sum over trains of the longest elementary-route path to a final.

    Counted in allocations: traversing into a partial route of a new
    elementary route costs one, staying within the current one is free.
    Routes already held initially cost nothing, and a train standing on a
    final route contributes zero.  Unreachable final alternatives are
    ignored.
    """
    infra = inst.infrastructure
    order = infra.topological_order()
    total = 0
    for t in inst.trains:
        if set(t.initial) & t.final:
            continue
        best: dict[RouteId, float] = {}
        for r in reversed(order):
            route = infra.proutes[r]
            score = 0.0 if r in t.final else float("-inf")
            for b in infra.next_routes(route):
                cost = 0 if b.elementary == route.elementary else 1
                score = max(score, cost + best[b.id])
            best[r] = score
        head = best[t.initial[-1]]
        if head > 0:
            total += int(head)
    return total


def extract_plan(enc: EncodingSession, model: Sat, k: int) -> Plan:
    """Per-step allocation sets: elementary routes newly entered."""
    infra = enc.inst.infrastructure
    plan: Plan = []
    prev = enc.occupancy(model, 0)
    for i in range(1, k + 1):
        cur = enc.occupancy(model, i)
        acts = {
            (t, infra.proutes[r].elementary)
            for r, t in cur.items()
            if prev.get(r) != t
        }
        plan.append(sorted(acts))
        prev = cur
    return plan


def partial_order(inst: ProblemInstance, plan: Plan) -> PartialOrder:
    """The plan's partial order over allocation events.

    Contains each train's allocation sequence, plus an edge between any
    two allocations of conflicting (or identical) resources in the order
    the plan performs them.  Allocations within one step never conflict,
    so the step order determines the relation completely.
    """
    infra = inst.infrastructure
    events: list[tuple[int, TrainId, RouteId]] = []
    for i, acts in enumerate(plan):
        for t, e in acts:
            events.append((i, t, e))

    def clash(e1: RouteId, e2: RouteId) -> bool:
        p1, p2 = infra.eroutes[e1].parts, infra.eroutes[e2].parts
        return bool(set(p1) & set(p2)) or any(
            infra.conflicts(a, b) for a in p1 for b in p2
        )

    # Order each train's allocations along its path; allocations sharing
    # a step are sorted by the route graph's topological order.
    topo = {r: k for k, r in enumerate(infra.topological_order())}
    g = nx.DiGraph()
    g.add_nodes_from((t, e) for _, t, e in events)
    by_train: dict[TrainId, list[tuple[int, int, RouteId]]] = {}
    for i, t, e in events:
        by_train.setdefault(t, []).append((i, min(topo[r] for r in infra.eroutes[e].parts), e))
    for t, seq in by_train.items():
        seq.sort()
        for (_, _, e1), (_, _, e2) in zip(seq, seq[1:]):
            g.add_edge((t, e1), (t, e2))
    for i1, t1, e1 in events:
        for i2, t2, e2 in events:
            if i1 < i2 and clash(e1, e2):
                g.add_edge((t1, e1), (t2, e2))
    closure = nx.transitive_closure_dag(g)
    return PartialOrder(
        nodes=frozenset(g.nodes()),
        relation=frozenset(closure.edges()),
    )


def detect(
    inst: ProblemInstance,
    algorithm: int = 3,
    backend: str | None = None,
    timeout: float | None = None,
    dimacs_path: str | None = None,
) -> Verdict:
    """Decide liveness of the instance's current situation."""
    if algorithm not in (1, 2, 3):
        raise ValueError(f"algorithm must be 1, 2 or 3, got {algorithm}")
    t0 = time.perf_counter()
    deadline = None if timeout is None else time.monotonic() + timeout

    def done(status: str, steps: int, plan: Plan | None = None) -> Verdict:
        return Verdict(status, steps, time.perf_counter() - t0, algorithm, plan)

    # A fully finished situation needs no plan; the progress constraint
    # of algorithms 2 and 3 would otherwise demand an impossible action.
    if dynamics.all_finished(inst, dynamics.initial_state(inst)):
        return done("live", 0, [])

    bound = compute_upper_bound(inst)
    with make_solver(backend) as solver:
        enc = EncodingSession(
            inst,
            solver,
            with_progress=algorithm >= 2,
            with_maximal_progress=algorithm == 3,
        )
        try:
            if algorithm == 1:
                for i in range(1, bound + 1):
                    enc.extend_step()
                    res = solver.solve_under(enc.goal_assumptions(i), deadline)
                    if isinstance(res, TimedOut):
                        return done("unknown", i)
                    if isinstance(res, Sat):
                        return done("live", i, extract_plan(enc, res, i))
                return done("dead", bound)

            # Algorithms 2 and 3 decide on their own; the bound is kept
            # only as a defensive cap against encoding bugs.
            for i in range(1, bound + 2):
                enc.extend_step()
                res = solver.solve_under([], deadline)
                if isinstance(res, TimedOut):
                    return done("unknown", i)
                if isinstance(res, Unsat):
                    return done("dead", i)
                res = solver.solve_under(enc.goal_assumptions(i), deadline)
                if isinstance(res, TimedOut):
                    return done("unknown", i)
                if isinstance(res, Sat):
                    return done("live", i, extract_plan(enc, res, i))
            raise InternalInconsistency(
                f"no decision after {bound + 1} steps (bound {bound})"
            )
        finally:
            if dimacs_path is not None:
                with open(dimacs_path, "w") as fp:
                    enc.dump_dimacs(fp)
