import json

import pytest

from railock.generator import gen_corridor, gen_junction, gen_ladder
from railock.model import (
    ConflictingInitialPositions,
    CyclicRouteGraph,
    ElementaryRoute,
    Infrastructure,
    MalformedSyntax,
    NoncontiguousInitialPosition,
    PartialRoute,
    ProblemInstance,
    TrainSpec,
    UnknownReference,
    instances_equal,
    parse_instance,
    serialize_instance,
)


def small_doc():
    return {
        "infrastructure": {
            "delimiters": ["d0"],
            "partial_routes": [
                {"id": "a", "length": 1.0, "entry": None, "exit": "d0"},
                {"id": "b", "length": 1.0, "entry": "d0", "exit": None},
            ],
            "elementary_routes": [
                {"id": "a", "parts": ["a"]},
                {"id": "b", "parts": ["b"]},
            ],
            "conflicts": [],
        },
        "trains": [
            {"id": "t1", "length": 0.5, "initial": ["a"], "final": ["b"]},
        ],
    }


def test_parse_small_doc():
    inst = parse_instance(json.dumps(small_doc()))
    assert sorted(inst.infrastructure.proutes) == ["a", "b"]
    assert inst.trains[0].initial == ("a",)
    assert inst.trains[0].final == frozenset({"b"})


def test_round_trip_small():
    inst = parse_instance(json.dumps(small_doc()))
    again = parse_instance(serialize_instance(inst))
    assert instances_equal(inst, again)


@pytest.mark.parametrize("build", [
    lambda: gen_ladder(2),
    lambda: gen_corridor(9, 2.25, 2.25),
    lambda: gen_corridor(9, 0.8, 0.8),
    lambda: gen_junction(),
])
def test_round_trip_generated(build):
    inst = build()
    again = parse_instance(serialize_instance(inst))
    assert instances_equal(inst, again)


def test_parse_bytes():
    inst = parse_instance(json.dumps(small_doc()).encode())
    assert len(inst.trains) == 1


def test_invalid_json():
    with pytest.raises(MalformedSyntax):
        parse_instance("{nope")


def test_missing_keys():
    with pytest.raises(MalformedSyntax):
        parse_instance('{"trains": []}')


def test_unknown_delimiter():
    doc = small_doc()
    doc["infrastructure"]["partial_routes"][0]["exit"] = "ghost"
    with pytest.raises(UnknownReference):
        parse_instance(json.dumps(doc))


def test_unknown_conflict_route():
    doc = small_doc()
    doc["infrastructure"]["conflicts"] = [["a", "ghost"]]
    with pytest.raises(UnknownReference):
        parse_instance(json.dumps(doc))


def test_reflexive_conflict():
    doc = small_doc()
    doc["infrastructure"]["conflicts"] = [["a", "a"]]
    with pytest.raises(MalformedSyntax):
        parse_instance(json.dumps(doc))


def test_route_without_elementary():
    doc = small_doc()
    doc["infrastructure"]["elementary_routes"] = [{"id": "a", "parts": ["a"]}]
    with pytest.raises((MalformedSyntax, UnknownReference)):
        parse_instance(json.dumps(doc))


def test_elementary_parts_must_chain():
    doc = small_doc()
    doc["infrastructure"]["delimiters"] = ["d0", "d1"]
    doc["infrastructure"]["partial_routes"].append(
        {"id": "c", "length": 1.0, "entry": "d1", "exit": None}
    )
    doc["infrastructure"]["elementary_routes"] = [
        {"id": "a", "parts": ["a", "c"]},
        {"id": "b", "parts": ["b"]},
    ]
    with pytest.raises(MalformedSyntax):
        parse_instance(json.dumps(doc))


def test_cyclic_route_graph():
    doc = small_doc()
    doc["infrastructure"]["partial_routes"] = [
        {"id": "a", "length": 1.0, "entry": "d0", "exit": "d1"},
        {"id": "b", "length": 1.0, "entry": "d1", "exit": "d0"},
    ]
    doc["infrastructure"]["delimiters"] = ["d0", "d1"]
    with pytest.raises(CyclicRouteGraph):
        parse_instance(json.dumps(doc))


def test_noncontiguous_initial():
    inst = gen_corridor(4, None, None)
    infra = inst.infrastructure
    with pytest.raises(NoncontiguousInitialPosition):
        ProblemInstance(
            infrastructure=infra,
            trains=[TrainSpec("t1", 1.0, ("east_1", "east_3"), frozenset({"east_4"}))],
        )


def test_conflicting_initial_positions():
    inst = gen_corridor(4, None, None)
    infra = inst.infrastructure
    with pytest.raises(ConflictingInitialPositions):
        ProblemInstance(
            infrastructure=infra,
            trains=[
                TrainSpec("t1", 1.0, ("east_2",), frozenset({"east_4"})),
                TrainSpec("t2", 1.0, ("west_2",), frozenset({"west_1"})),
            ],
        )


def test_duplicate_train_id():
    inst = gen_corridor(4, None, None)
    with pytest.raises(MalformedSyntax):
        ProblemInstance(
            infrastructure=inst.infrastructure,
            trains=[
                TrainSpec("t1", 1.0, ("east_1",), frozenset({"east_4"})),
                TrainSpec("t1", 1.0, ("east_3",), frozenset({"east_4"})),
            ],
        )


def test_successors_corridor(corridor_long):
    infra = corridor_long.infrastructure
    # Inside the corridor each delimiter feeds exactly one onward route
    # per direction.
    assert [r.id for r in infra.successors("d0")] == ["east_2"]
    assert [r.id for r in infra.successors("u0")] == ["west_1"]


def test_successors_junction_branching(junction):
    infra = junction.infrastructure
    assert [r.id for r in infra.successors("n1")] == ["r3e", "r6e"]


def test_successors_unknown_delimiter(junction):
    with pytest.raises(UnknownReference):
        junction.infrastructure.successors("nope")


def test_conflicts_symmetric(ladder2):
    infra = ladder2.infrastructure
    assert infra.conflicts("tAE1", "tAW1")
    assert infra.conflicts("tAW1", "tAE1")
    assert not infra.conflicts("tAE1", "tBE1")


def test_topological_order(junction):
    infra = junction.infrastructure
    order = infra.topological_order()
    pos = {r: i for i, r in enumerate(order)}
    for r in infra.proutes.values():
        for b in infra.next_routes(r):
            assert pos[r.id] < pos[b.id]


def test_train_lookup(ladder2):
    assert ladder2.train("t1").length == pytest.approx(1.4)
    with pytest.raises(UnknownReference):
        ladder2.train("ghost")


def test_multi_part_elementary_route():
    infra = Infrastructure(
        delimiters={"d0", "d1"},
        proutes={
            "a": PartialRoute("a", 1.0, None, "d0", elementary="e"),
            "b": PartialRoute("b", 1.0, "d0", "d1", elementary="e"),
            "c": PartialRoute("c", 1.0, "d1", None, elementary="c"),
        },
        eroutes={
            "e": ElementaryRoute("e", ("a", "b")),
            "c": ElementaryRoute("c", ("c",)),
        },
        conflicts=set(),
    )
    assert infra.eroutes["e"].parts == ("a", "b")
