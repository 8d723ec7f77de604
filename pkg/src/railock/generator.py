"""Synthetic instance families for tests and benchmarks.

Bidirectional track is modeled as two directed route copies with a
mutual conflict.  Every partial route is its own elementary route in
these families; multi-part elementary routes only appear in hand-written
test fixtures.
"""

from __future__ import annotations

import math
import random

from .model import (
    ElementaryRoute,
    Infrastructure,
    PartialRoute,
    ProblemInstance,
    TrainSpec,
)


class InvalidParameter(Exception):
    pass


def _build(delims, routes, conflicts, trains) -> ProblemInstance:
    proutes = {
        r["id"]: PartialRoute(
            id=r["id"], length=r["len"], entry=r["in"], exit=r["out"],
            elementary=r["id"],
        )
        for r in routes
    }
    eroutes = {rid: ElementaryRoute(id=rid, parts=(rid,)) for rid in proutes}
    infra = Infrastructure(set(delims), proutes, eroutes, set(conflicts))
    return ProblemInstance(infrastructure=infra, trains=trains)


def gen_corridor(
    n_routes: int,
    left_train_len: float | None,
    right_train_len: float | None = None,
) -> ProblemInstance:
    """Single bidirectional line of unit routes with boundary exits.

    Trains are placed as in the worked corridor scenarios: a train
    spanning one route sits on the boundary route of its end, a longer
    train sits just inside it, leaving the boundary route behind it free.
    A train length of None or 0 omits that train.
    """
    if n_routes < 2:
        raise InvalidParameter(f"corridor needs at least 2 routes, got {n_routes}")
    delims = [f"d{k}" for k in range(n_routes - 1)] + [
        f"u{k}" for k in range(n_routes - 1)
    ]
    routes = []
    for k in range(1, n_routes + 1):
        routes.append({
            "id": f"east_{k}", "len": 1.0,
            "in": None if k == 1 else f"d{k - 2}",
            "out": None if k == n_routes else f"d{k - 1}",
        })
        routes.append({
            "id": f"west_{k}", "len": 1.0,
            "in": None if k == n_routes else f"u{k - 1}",
            "out": None if k == 1 else f"u{k - 2}",
        })
    conflicts = [(f"east_{k}", f"west_{k}") for k in range(1, n_routes + 1)]

    def span_of(length: float) -> int:
        return max(1, math.ceil(length - 1e-9))

    trains = []
    if left_train_len:
        if left_train_len < 0:
            raise InvalidParameter("negative train length")
        span = span_of(left_train_len)
        lo = 1 if span == 1 else 2
        if lo + span - 1 > n_routes:
            raise InvalidParameter("left train does not fit the corridor")
        trains.append(TrainSpec(
            id="t1", length=left_train_len,
            initial=tuple(f"east_{k}" for k in range(lo, lo + span)),
            final=frozenset({f"east_{n_routes}"}),
        ))
    if right_train_len:
        if right_train_len < 0:
            raise InvalidParameter("negative train length")
        span = span_of(right_train_len)
        hi = n_routes if span == 1 else n_routes - 1
        if hi - span + 1 < 1 or (trains and hi - span + 1 <= span_of(left_train_len) + (0 if span_of(left_train_len) == 1 else 1)):
            raise InvalidParameter("trains overlap or do not fit the corridor")
        trains.append(TrainSpec(
            id="t2", length=right_train_len,
            initial=tuple(f"west_{k}" for k in range(hi, hi - span, -1)),
            final=frozenset({"west_1"}),
        ))
    return _build(delims, routes, conflicts, trains)


def gen_ladder(n: int, train_len: float | None = None, track_len: float = 1.0) -> ProblemInstance:
    """n two-track stations on a single line, one train per direction.

    Each station has, per direction, a short approach route over the
    entry switch, two parallel track routes of length ``track_len`` and
    an exit route spanning the single line to the next station.  Station
    tracks conflict with their opposite-direction copies.  On the single
    line, the two directions release at different points, so an exit
    conflicts with both opposing halves while the opposing approaches
    conflict only with each other.  The default train length is 1.4x the
    track length: a train longer than a station track cannot clear the
    approach switch behind it, blocks the line and the trains cannot
    cross.
    """
    if n < 1:
        raise InvalidParameter(f"ladder needs at least 1 station, got {n}")
    if train_len is None:
        train_len = 1.4 * track_len
    if train_len <= 0 or track_len <= 0:
        raise InvalidParameter("lengths must be positive")
    app_len = 0.05 * track_len
    seg_len = 1.5 * track_len
    delims: list[str] = []
    routes = []
    conflicts = []
    for j in range(1, n + 1):
        for d in ("e", "w"):
            delims += [f"{d}{j}in", f"{d}{j}out", f"{d}{j}link"]

    def add(rid, length, entry, exit_):
        routes.append({"id": rid, "len": length, "in": entry, "out": exit_})

    for j in range(1, n + 1):
        # Eastbound, stations numbered west to east.
        add(f"aE{j}", app_len, None if j == 1 else f"e{j - 1}link", f"e{j}in")
        add(f"tAE{j}", track_len, f"e{j}in", f"e{j}out")
        add(f"tBE{j}", track_len, f"e{j}in", f"e{j}out")
        add(f"xE{j}", seg_len, f"e{j}out", None if j == n else f"e{j}link")
        # Westbound runs the stations in reverse.
        add(f"aW{j}", app_len, None if j == n else f"w{j + 1}link", f"w{j}in")
        add(f"tAW{j}", track_len, f"w{j}in", f"w{j}out")
        add(f"tBW{j}", track_len, f"w{j}in", f"w{j}out")
        add(f"xW{j}", seg_len, f"w{j}out", None if j == 1 else f"w{j}link")
        conflicts += [(f"tAE{j}", f"tAW{j}"), (f"tBE{j}", f"tBW{j}")]
    # Single-track halves between neighboring stations and at the ends.
    conflicts.append(("aE1", "xW1"))
    conflicts.append((f"xE{n}", f"aW{n}"))
    for j in range(1, n):
        # Single line between stations j and j+1: the exits overlap each
        # other and the opposing approach switch; the approach switches
        # additionally exclude one another.
        conflicts.append((f"xE{j}", f"xW{j + 1}"))
        conflicts.append((f"aE{j + 1}", f"aW{j}"))
        conflicts.append((f"xE{j}", f"aW{j}"))
    trains = [
        TrainSpec(id="t1", length=train_len, initial=("aE1",),
                  final=frozenset({f"xE{n}"})),
        TrainSpec(id="t2", length=train_len, initial=(f"aW{n}",),
                  final=frozenset({"xW1"})),
    ]
    return _build(delims, routes, conflicts, trains)


def gen_junction() -> ProblemInstance:
    """Main line with a branch siding leaving at the junction route.

    Main line r1..r5 west to east, branch r6,r7 parallel to r4,r5.  The
    eastbound branch entry r6e leaves at the same delimiter as the
    straight continuation r3e; the westbound junction route r3w comes
    off the branch.  Routes over the shared switch conflict.  Train t1
    starts at the west end heading east, t2 on the branch end heading
    west.
    """
    delims = ["n0", "n1", "n3", "n4", "b3", "b4",
              "m0", "m1", "m3", "m4"]
    routes = [
        {"id": "r1e", "len": 1.0, "in": None, "out": "n0"},
        {"id": "r2e", "len": 1.0, "in": "n0", "out": "n1"},
        {"id": "r3e", "len": 2.0, "in": "n1", "out": "n3"},
        {"id": "r4e", "len": 1.0, "in": "n3", "out": "n4"},
        {"id": "r5e", "len": 1.0, "in": "n4", "out": None},
        {"id": "r6e", "len": 3.0, "in": "n1", "out": "b4"},
        {"id": "r7e", "len": 1.0, "in": "b4", "out": None},
        {"id": "r1w", "len": 1.0, "in": "m0", "out": None},
        {"id": "r2w", "len": 1.0, "in": "m1", "out": "m0"},
        {"id": "r3w", "len": 2.0, "in": "b3", "out": "m1"},
        {"id": "r4w", "len": 1.0, "in": "m3", "out": "m1"},
        {"id": "r5w", "len": 1.0, "in": None, "out": "m3"},
        {"id": "r6w", "len": 1.0, "in": "b4", "out": "b3"},
        {"id": "r7w", "len": 1.0, "in": None, "out": "b4"},
    ]
    conflicts = [
        ("r1e", "r1w"), ("r2e", "r2w"), ("r3e", "r3w"), ("r4e", "r4w"),
        ("r5e", "r5w"), ("r6e", "r6w"), ("r7e", "r7w"),
        # Switch area: the straight junction route, its westbound copy
        # and the eastbound branch entry all cross the same switch.
        ("r3e", "r6e"), ("r3w", "r6e"),
    ]
    trains = [
        TrainSpec(id="t1", length=0.8, initial=("r1e",),
                  final=frozenset({"r5e", "r7e"})),
        TrainSpec(id="t2", length=0.8, initial=("r7w",),
                  final=frozenset({"r1w"})),
    ]
    return _build(delims, routes, conflicts, trains)


def gen_random(seed: int) -> ProblemInstance:
    """Small randomized instance with a construction-known mix of verdicts.

    Samples a family and its parameters; stays within 4 trains and 40
    partial routes so the explicit-search oracle stays cheap.
    """
    rng = random.Random(seed)
    kind = rng.choice(["corridor1", "corridor2", "ladder", "junction"])
    if kind == "corridor1":
        n = rng.randint(2, 12)
        return gen_corridor(n, rng.choice([0.5, 0.8, 1.0]), None)
    if kind == "corridor2":
        n = rng.randint(4, 12)
        left = rng.choice([0.5, 0.8, 1.0])
        right = rng.choice([0.5, 0.8, 1.0])
        if n >= 8 and rng.random() < 0.5:
            left = rng.choice([2.25, 2.8])
        return gen_corridor(n, left, right)
    if kind == "ladder":
        n = rng.randint(1, 2)
        track = 1.0
        train = rng.choice([0.7, 0.9, 1.3, 1.6])
        return gen_ladder(n, train_len=train, track_len=track)
    return gen_junction()
