import json

import pytest
from fastapi.testclient import TestClient

from railock import dynamics
from railock.api import create_app, instance_from_state
from railock.generator import gen_junction, gen_ladder
from railock.model import serialize_instance


@pytest.fixture
def client():
    with TestClient(create_app()) as c:
        yield c


def open_session(client, inst):
    res = client.post("/sessions", content=serialize_instance(inst))
    assert res.status_code == 200
    return res.json()


def test_create_session_junction_live(client, junction):
    doc = open_session(client, junction)
    assert set(doc) == {"id", "state", "legal_actions", "verdict", "history"}
    assert doc["verdict"]["status"] == "live"
    assert doc["history"] == []
    assert doc["state"]["occ"] == {"r1e": "t1", "r7w": "t2"}
    assert doc["state"]["finished"] == []
    assert sorted(doc["state"]["present"]) == ["t1", "t2"]


def test_create_session_ladder_dead(client, ladder2):
    doc = open_session(client, ladder2)
    assert doc["verdict"]["status"] == "dead"
    assert doc["verdict"]["steps"] == 3


def test_create_session_bad_instance(client):
    res = client.post("/sessions", content=b'{"trains": []}')
    assert res.status_code == 400


def test_legal_actions_match_dynamics(client, junction):
    doc = open_session(client, junction)
    state = dynamics.initial_state(junction)
    expected = sorted(dynamics.legal_actions(junction, state))
    got = [(a["train"], a["route"]) for a in doc["legal_actions"]]
    assert got == expected


def test_flip_to_dead_and_undo(client, junction):
    doc = open_session(client, junction)
    sid = doc["id"]

    # Heading onto the branch while the opposing train holds the far
    # junction throat blocks both trains for good.
    for route in ("r2e", "r6e"):
        res = client.post(f"/sessions/{sid}/actions",
                          json={"train": "t1", "elementary_route": route})
        assert res.status_code == 200
        doc = res.json()
    assert doc["verdict"]["status"] == "dead"
    assert [h["elementary_route"] for h in doc["history"]] == ["r2e", "r6e"]

    res = client.post(f"/sessions/{sid}/undo")
    assert res.status_code == 200
    doc = res.json()
    assert doc["verdict"]["status"] == "live"
    assert [h["elementary_route"] for h in doc["history"]] == ["r2e"]


def test_apply_then_undo_restores_state_exactly(client, junction):
    doc = open_session(client, junction)
    sid = doc["id"]
    before = json.dumps(doc["state"], sort_keys=True)
    client.post(f"/sessions/{sid}/actions",
                json={"train": "t1", "elementary_route": "r2e"})
    after = client.post(f"/sessions/{sid}/undo").json()
    assert json.dumps(after["state"], sort_keys=True) == before


def test_illegal_action_409(client, junction):
    sid = open_session(client, junction)["id"]
    res = client.post(f"/sessions/{sid}/actions",
                      json={"train": "t1", "elementary_route": "r5e"})
    assert res.status_code == 409
    # The failed request leaves nothing to undo beyond the initial state.
    assert client.post(f"/sessions/{sid}/undo").status_code == 409


def test_action_missing_fields_400(client, junction):
    sid = open_session(client, junction)["id"]
    res = client.post(f"/sessions/{sid}/actions", json={"train": "t1"})
    assert res.status_code == 400


def test_unknown_session_404(client):
    assert client.get("/sessions/deadbeef").status_code == 404
    assert client.post("/sessions/deadbeef/undo").status_code == 404
    assert client.post(
        "/sessions/deadbeef/actions",
        json={"train": "t1", "elementary_route": "r2e"},
    ).status_code == 404


def test_get_matches_last_snapshot(client, junction):
    doc = open_session(client, junction)
    sid = doc["id"]
    fetched = client.get(f"/sessions/{sid}").json()
    # Detection reruns per request, so only the timing may differ.
    fetched["verdict"].pop("time_s")
    doc["verdict"].pop("time_s")
    assert fetched == doc


def test_instance_from_state_drops_departed_train(junction):
    state = dynamics.initial_state(junction)
    # Walk t1 off the east boundary while t2 advances only partway.
    for train, route in (("t1", "r2e"), ("t1", "r3e"), ("t1", "r4e"),
                         ("t1", "r5e"), ("t2", "r6w"), ("t2", "r3w")):
        state = dynamics.apply_action(junction, state, train, route)
    while state.routes_of("t1"):
        state = dynamics.advance(junction, state)
    assert state.routes_of("t2")
    rebuilt = instance_from_state(junction, state)
    assert [t.id for t in rebuilt.trains] == ["t2"]


def test_instance_from_state_orders_chain(corridor_long):
    state = dynamics.initial_state(corridor_long)
    state = dynamics.apply_action(corridor_long, state, "t1", "east_5")
    rebuilt = instance_from_state(corridor_long, state)
    t1 = next(t for t in rebuilt.trains if t.id == "t1")
    assert t1.initial == tuple(sorted(
        state.routes_of("t1"),
        key={r: k for k, r in
             enumerate(corridor_long.infrastructure.topological_order())
             }.__getitem__,
    ))
    assert t1.initial[-1] == "east_5"
