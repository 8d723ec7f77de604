"""Problem data model: infrastructure, trains, and the on-disk instance format.

An infrastructure is a directed acyclic graph of partial routes connected
through named delimiters.  Partial routes group into elementary routes
(the atomic allocation units), and a symmetric conflict relation marks
pairs of partial routes that may not be held simultaneously.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter

RouteId = str
DelimId = str
TrainId = str


class InstanceError(Exception):
    """Base class for instance validation failures."""


class MalformedSyntax(InstanceError):
    pass


class UnknownReference(InstanceError):
    pass


class CyclicRouteGraph(InstanceError):
    pass


class NoncontiguousInitialPosition(InstanceError):
    pass


class ConflictingInitialPositions(InstanceError):
    pass


@dataclass(frozen=True)
class PartialRoute:
    id: RouteId
    length: float
    entry: DelimId | None
    exit: DelimId | None
    elementary: RouteId = ""


@dataclass(frozen=True)
class ElementaryRoute:
    id: RouteId
    parts: tuple[RouteId, ...]


@dataclass(frozen=True)
class TrainSpec:
    id: TrainId
    length: float
    initial: tuple[RouteId, ...]
    final: frozenset[RouteId]


class Infrastructure:
    """Validated route graph.  Immutable after construction."""

    def __init__(
        self,
        delimiters: set[DelimId],
        proutes: dict[RouteId, PartialRoute],
        eroutes: dict[RouteId, ElementaryRoute],
        conflicts: set[tuple[RouteId, RouteId]],
    ):
        self.delimiters = frozenset(delimiters)
        self.proutes = dict(proutes)
        self.eroutes = dict(eroutes)
        # Stored symmetrically; input may be one-sided.
        self._conflicts: set[tuple[RouteId, RouteId]] = set()
        for a, b in conflicts:
            self._conflicts.add((a, b))
            self._conflicts.add((b, a))
        self._successors: dict[DelimId, list[PartialRoute]] = {}
        for r in self.proutes.values():
            if r.entry is not None:
                self._successors.setdefault(r.entry, []).append(r)
        for rs in self._successors.values():
            rs.sort(key=lambda r: r.id)
        self._validate()

    def _validate(self) -> None:
        for r in self.proutes.values():
            if r.length < 0:
                raise MalformedSyntax(f"route {r.id}: negative length")
            if r.entry is None and r.exit is None:
                raise MalformedSyntax(f"route {r.id}: both entry and exit are null")
            for d in (r.entry, r.exit):
                if d is not None and d not in self.delimiters:
                    raise UnknownReference(f"route {r.id}: unknown delimiter {d!r}")
            if r.elementary not in self.eroutes:
                raise UnknownReference(f"route {r.id}: unknown elementary route {r.elementary!r}")
        seen_parts: set[RouteId] = set()
        for e in self.eroutes.values():
            if not e.parts:
                raise MalformedSyntax(f"elementary route {e.id}: empty part list")
            for p in e.parts:
                if p not in self.proutes:
                    raise UnknownReference(f"elementary route {e.id}: unknown part {p!r}")
                if p in seen_parts:
                    raise MalformedSyntax(f"partial route {p} listed in two elementary routes")
                if self.proutes[p].elementary != e.id:
                    raise MalformedSyntax(f"partial route {p} assigned to {self.proutes[p].elementary}, listed in {e.id}")
                seen_parts.add(p)
            for a, b in zip(e.parts, e.parts[1:]):
                if self.proutes[a].exit is None or self.proutes[a].exit != self.proutes[b].entry:
                    raise MalformedSyntax(f"elementary route {e.id}: parts {a},{b} do not chain")
        for p in self.proutes:
            if p not in seen_parts:
                raise MalformedSyntax(f"partial route {p} belongs to no elementary route")
        for a, b in self._conflicts:
            if a == b:
                raise MalformedSyntax(f"reflexive conflict on {a}")
            if a not in self.proutes or b not in self.proutes:
                missing = a if a not in self.proutes else b
                raise UnknownReference(f"conflict references unknown route {missing!r}")
        self.topological_order()  # raises CyclicRouteGraph

    def successors(self, d: DelimId) -> list[PartialRoute]:
        """All partial routes whose entry delimiter is ``d``."""
        if d not in self.delimiters:
            raise UnknownReference(f"unknown delimiter {d!r}")
        return list(self._successors.get(d, []))

    def next_routes(self, r: PartialRoute) -> list[PartialRoute]:
        if r.exit is None:
            return []
        return self._successors.get(r.exit, [])

    def conflicts(self, a: RouteId, b: RouteId) -> bool:
        return (a, b) in self._conflicts

    def conflicts_of(self, a: RouteId) -> list[RouteId]:
        return sorted(b for (x, b) in self._conflicts if x == a)

    def conflict_pairs(self) -> list[tuple[RouteId, RouteId]]:
        """Each unordered pair once, lexicographically."""
        return sorted((a, b) for (a, b) in self._conflicts if a < b)

    def topological_order(self) -> list[RouteId]:
        ts = TopologicalSorter(
            {
                r.id: [b.id for b in self.next_routes(r)]
                for r in self.proutes.values()
            }
        )
        try:
            order = list(ts.static_order())
        except CycleError as exc:
            raise CyclicRouteGraph(str(exc)) from None
        order.reverse()  # edges point a -> b with b after a
        return order


@dataclass
class ProblemInstance:
    infrastructure: Infrastructure
    trains: list[TrainSpec] = field(default_factory=list)

    def __post_init__(self) -> None:
        infra = self.infrastructure
        seen_ids: set[TrainId] = set()
        for t in self.trains:
            if t.id in seen_ids:
                raise MalformedSyntax(f"duplicate train id {t.id!r}")
            seen_ids.add(t.id)
            if t.length <= 0:
                raise MalformedSyntax(f"train {t.id}: nonpositive length")
            if not t.initial:
                raise NoncontiguousInitialPosition(f"train {t.id}: empty initial position")
            if not t.final:
                raise MalformedSyntax(f"train {t.id}: empty final route set")
            for r in tuple(t.initial) + tuple(t.final):
                if r not in infra.proutes:
                    raise UnknownReference(f"train {t.id}: unknown route {r!r}")
            for a, b in zip(t.initial, t.initial[1:]):
                ra, rb = infra.proutes[a], infra.proutes[b]
                if ra.exit is None or ra.exit != rb.entry:
                    raise NoncontiguousInitialPosition(f"train {t.id}: initial routes {a},{b} do not chain")
            self._warn_unreachable_finals(t)
        for i, t in enumerate(self.trains):
            occupied_t = set(t.initial)
            for u in self.trains[i + 1:]:
                for a in occupied_t:
                    for b in u.initial:
                        if a == b:
                            raise ConflictingInitialPositions(f"trains {t.id},{u.id} both start on {a}")
                        if infra.conflicts(a, b):
                            raise ConflictingInitialPositions(
                                f"trains {t.id},{u.id} start on conflicting routes {a},{b}"
                            )

    def _warn_unreachable_finals(self, t: TrainSpec) -> None:
        infra = self.infrastructure
        reachable: set[RouteId] = set(t.initial)
        stack = [t.initial[-1]]
        while stack:
            for nxt in infra.next_routes(infra.proutes[stack.pop()]):
                if nxt.id not in reachable:
                    reachable.add(nxt.id)
                    stack.append(nxt.id)
        for f in sorted(t.final):
            if f not in reachable:
                warnings.warn(f"train {t.id}: final alternative {f} unreachable from initial position")

    def train(self, tid: TrainId) -> TrainSpec:
        for t in self.trains:
            if t.id == tid:
                return t
        raise UnknownReference(f"unknown train {tid!r}")


def successors(inst: ProblemInstance, d: DelimId) -> list[PartialRoute]:
    return inst.infrastructure.successors(d)


def parse_instance(text: str | bytes) -> ProblemInstance:
    """Parse and fully validate the documented JSON instance format."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedSyntax(f"invalid JSON: {exc}") from None
    try:
        infra_doc = doc["infrastructure"]
        delimiters = set(infra_doc["delimiters"])
        if len(delimiters) != len(infra_doc["delimiters"]):
            raise MalformedSyntax("duplicate delimiter ids")
        proutes: dict[RouteId, PartialRoute] = {}
        for rd in infra_doc["partial_routes"]:
            if rd["id"] in proutes:
                raise MalformedSyntax(f"duplicate partial route id {rd['id']!r}")
            proutes[rd["id"]] = PartialRoute(
                id=rd["id"],
                length=float(rd["length"]),
                entry=rd.get("entry"),
                exit=rd.get("exit"),
            )
        eroutes: dict[RouteId, ElementaryRoute] = {}
        for ed in infra_doc["elementary_routes"]:
            if ed["id"] in eroutes:
                raise MalformedSyntax(f"duplicate elementary route id {ed['id']!r}")
            eroutes[ed["id"]] = ElementaryRoute(id=ed["id"], parts=tuple(ed["parts"]))
        for e in eroutes.values():
            for p in e.parts:
                if p in proutes:
                    proutes[p] = PartialRoute(
                        id=proutes[p].id,
                        length=proutes[p].length,
                        entry=proutes[p].entry,
                        exit=proutes[p].exit,
                        elementary=e.id,
                    )
        conflicts = {(a, b) for a, b in (tuple(c) for c in infra_doc["conflicts"])}
        trains = [
            TrainSpec(
                id=td["id"],
                length=float(td["length"]),
                initial=tuple(td["initial"]),
                final=frozenset(td["final"]),
            )
            for td in doc["trains"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedSyntax(f"bad instance document: {exc!r}") from None
    infra = Infrastructure(delimiters, proutes, eroutes, conflicts)
    return ProblemInstance(infrastructure=infra, trains=trains)


def serialize_instance(inst: ProblemInstance) -> str:
    """Inverse of :func:`parse_instance` up to structural equality."""
    infra = inst.infrastructure
    doc = {
        "infrastructure": {
            "delimiters": sorted(infra.delimiters),
            "partial_routes": [
                {"id": r.id, "length": r.length, "entry": r.entry, "exit": r.exit}
                for r in sorted(infra.proutes.values(), key=lambda r: r.id)
            ],
            "elementary_routes": [
                {"id": e.id, "parts": list(e.parts)}
                for e in sorted(infra.eroutes.values(), key=lambda e: e.id)
            ],
            "conflicts": [list(p) for p in infra.conflict_pairs()],
        },
        "trains": [
            {
                "id": t.id,
                "length": t.length,
                "initial": list(t.initial),
                "final": sorted(t.final),
            }
            for t in inst.trains
        ],
    }
    return json.dumps(doc, indent=2)


def instances_equal(a: ProblemInstance, b: ProblemInstance) -> bool:
    return serialize_instance(a) == serialize_instance(b)
