"""Executable transition semantics: allocation, forced release, blocking.

A transition applies one set of (train, elementary route) allocations.
Forced releases are decided on the occupancy snapshot taken *before* the
allocations of the transition, mirroring how the step encoding links
consecutive states; this keeps replayed plans byte-identical with the
occupancies a solver model assigns.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Infrastructure, ProblemInstance, RouteId, TrainId


class IllegalAction(Exception):
    pass


@dataclass(frozen=True)
class SimState:
    occ: dict[RouteId, TrainId]
    finished: frozenset[TrainId]
    present: frozenset[TrainId]

    def routes_of(self, t: TrainId) -> set[RouteId]:
        return {r for r, u in self.occ.items() if u == t}

    def key(self) -> tuple:
        """Canonical hashable identity for memoized search."""
        return (
            tuple(sorted(self.occ.items())),
            tuple(sorted(self.finished)),
            tuple(sorted(self.present)),
        )

    def to_doc(self) -> dict:
        return {
            "occ": dict(sorted(self.occ.items())),
            "finished": sorted(self.finished),
            "present": sorted(self.present),
        }


def route_freeable(
    infra: Infrastructure, occ: dict[RouteId, TrainId], t: TrainId, r: RouteId, l: float
) -> bool:
    """Whether train ``t`` may release ``r`` given the occupancy snapshot.

    A route is releasable once its own length plus the lengths of the
    occupied routes ahead (excluding the last one reached) cover the
    residual train length ``l``.
    """
    route = infra.proutes[r]
    if route.exit is None or l <= 0:
        return True
    return any(
        occ.get(b.id) == t and route_freeable(infra, occ, t, b.id, l - route.length)
        for b in infra.next_routes(route)
    )


def initial_state(inst: ProblemInstance) -> SimState:
    occ: dict[RouteId, TrainId] = {}
    finished = set()
    for t in inst.trains:
        for r in t.initial:
            occ[r] = t.id
        if set(t.initial) & t.final:
            finished.add(t.id)
    return SimState(
        occ=occ,
        finished=frozenset(finished),
        present=frozenset(t.id for t in inst.trains),
    )


def releases(inst: ProblemInstance, s: SimState) -> set[RouteId]:
    """Routes forcibly released by the next transition, from snapshot ``s``."""
    out = set()
    for r, t in s.occ.items():
        train = inst.train(t)
        if route_freeable(inst.infrastructure, s.occ, t, r, train.length):
            out.add(r)
    return out


def head_delimiter(inst: ProblemInstance, s: SimState, t: TrainId) -> str | None:
    """Exit delimiter of the train's frontmost occupied route."""
    infra = inst.infrastructure
    routes = s.routes_of(t)
    heads = [
        r for r in routes
        if not any(b.id in routes for b in infra.next_routes(infra.proutes[r]))
    ]
    if not heads:
        return None
    # The occupied set is a chain, so there is exactly one head.
    return infra.proutes[sorted(heads)[0]].exit


def legal_actions(inst: ProblemInstance, s: SimState) -> set[tuple[TrainId, RouteId]]:
    """All (train, elementary route) allocations applicable in ``s``."""
    infra = inst.infrastructure
    out: set[tuple[TrainId, RouteId]] = set()
    occupied = set(s.occ)
    for t in inst.trains:
        if t.id not in s.present:
            continue
        head = head_delimiter(inst, s, t.id)
        if head is None:
            continue
        for first in infra.successors(head):
            e = infra.eroutes[infra.proutes[first.id].elementary]
            if e.parts[0] != first.id:
                continue
            if any(p in occupied for p in e.parts):
                continue
            if any(infra.conflicts(p, r) for p in e.parts for r in occupied):
                continue
            out.add((t.id, e.id))
    return out


def step(
    inst: ProblemInstance,
    s: SimState,
    actions: list[tuple[TrainId, RouteId]] | set[tuple[TrainId, RouteId]] = (),
) -> SimState:
    """One transition: forced releases from the snapshot, then allocations."""
    infra = inst.infrastructure
    freed = releases(inst, s)
    occ = {r: t for r, t in s.occ.items() if r not in freed}
    for t, e_id in actions:
        if e_id not in infra.eroutes:
            raise IllegalAction(f"unknown elementary route {e_id!r}")
        for p in infra.eroutes[e_id].parts:
            if occ.get(p, t) != t:
                raise IllegalAction(f"route {p} is held by {occ[p]}")
            occ[p] = t
    _check_occupancy(inst, occ, s)
    finished = set(s.finished)
    present = set()
    for t in inst.trains:
        routes = {r for r, u in occ.items() if u == t.id}
        if routes & t.final:
            finished.add(t.id)
        if routes:
            present.add(t.id)
    return SimState(occ=occ, finished=frozenset(finished), present=frozenset(present))


def _check_occupancy(inst: ProblemInstance, occ: dict[RouteId, TrainId], prev: SimState) -> None:
    infra = inst.infrastructure
    routes_by_train: dict[TrainId, set[RouteId]] = {}
    for r, t in occ.items():
        routes_by_train.setdefault(t, set()).add(r)
    held = sorted(occ)
    for i, a in enumerate(held):
        for b in held[i + 1:]:
            if infra.conflicts(a, b):
                raise IllegalAction(f"conflicting routes {a},{b} both held")
    for t, routes in routes_by_train.items():
        entries: set[str] = set()
        for r in sorted(routes):
            route = infra.proutes[r]
            if route.entry is not None:
                if route.entry in entries:
                    raise IllegalAction(f"train {t} holds two routes from delimiter {route.entry}")
                entries.add(route.entry)
            newly = prev.occ.get(r) != t
            if newly:
                preds = [
                    b for b in infra.proutes.values()
                    if route.entry is not None and b.exit == route.entry
                ]
                if not any(occ.get(b.id) == t for b in preds):
                    raise IllegalAction(f"train {t} allocated {r} without a connecting route")


def advance(inst: ProblemInstance, s: SimState) -> SimState:
    """Release-only transition (no allocations)."""
    return step(inst, s, ())


def apply_action(inst: ProblemInstance, s: SimState, t: TrainId, e_id: RouteId) -> SimState:
    if (t, e_id) not in legal_actions(inst, s):
        raise IllegalAction(f"({t},{e_id}) not applicable")
    return step(inst, s, [(t, e_id)])


def all_finished(inst: ProblemInstance, s: SimState) -> bool:
    return all(t.id in s.finished for t in inst.trains)


def replay_plan(inst: ProblemInstance, plan_steps: list[list[tuple[TrainId, RouteId]]]) -> SimState:
    """Execute per-step action sets; raises IllegalAction on any blocking.

    Trailing release-only transitions are applied until quiescent so that
    boundary exits complete; the caller checks the final state for the goal.
    """
    s = initial_state(inst)
    for actions in plan_steps:
        s = step(inst, s, actions)
    while True:
        nxt = advance(inst, s)
        if nxt.occ == s.occ and nxt.finished == s.finished:
            return nxt
        s = nxt
