"""HTTP sandbox: create a session, allocate routes, watch the verdict.

Sessions live in process memory.  Each applied action re-runs detection
on a fresh problem instance reconstructed from the live state (current
occupancy chains become the initial positions; trains that have left the
network are dropped), so the verdict always refers to the situation on
the board.  Requests within one session are serialized by a lock.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import dynamics
from .detector import detect
from .dynamics import IllegalAction, SimState
from .model import InstanceError, ProblemInstance, TrainSpec, parse_instance

SESSION_TTL_S = 3600.0
DETECT_TIMEOUT_S = 10.0


def instance_from_state(inst: ProblemInstance, state: SimState) -> ProblemInstance:
    """Rebuild a problem instance whose initial positions are ``state``.

    Trains no longer present on the network are dropped; each remaining
    train's occupied routes are ordered tail-to-head along the route
    graph to form its initial chain.
    """
    infra = inst.infrastructure
    topo = {r: k for k, r in enumerate(infra.topological_order())}
    trains = []
    for t in inst.trains:
        routes = sorted(state.routes_of(t.id), key=topo.__getitem__)
        if not routes:
            continue
        trains.append(TrainSpec(
            id=t.id, length=t.length, initial=tuple(routes), final=t.final,
        ))
    return ProblemInstance(infrastructure=infra, trains=trains)


@dataclass
class Session:
    id: str
    instance: ProblemInstance
    state: SimState
    history: list[dict] = field(default_factory=list)
    undo_stack: list[SimState] = field(default_factory=list)
    last_used: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def snapshot(self) -> dict:
        live_inst = instance_from_state(self.instance, self.state)
        verdict = detect(live_inst, algorithm=3, timeout=DETECT_TIMEOUT_S)
        actions = sorted(dynamics.legal_actions(self.instance, self.state))
        return {
            "id": self.id,
            "state": self.state.to_doc(),
            "legal_actions": [{"train": t, "route": r} for t, r in actions],
            "verdict": verdict.to_doc(),
            "history": list(self.history),
        }


def create_app() -> FastAPI:
    app = FastAPI(title="railock")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with registry_lock:
            now = time.monotonic()
            for sid in [s for s, sess in sessions.items()
                        if now - sess.last_used > SESSION_TTL_S]:
                del sessions[sid]
            sess = sessions.get(session_id)
            if sess is None:
                raise HTTPException(status_code=404, detail="unknown session")
            sess.last_used = now
            return sess

    @app.exception_handler(IllegalAction)
    def on_illegal(request: Request, exc: IllegalAction):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.post("/sessions")
    async def create_session(request: Request):
        body = await request.body()
        try:
            inst = parse_instance(body)
        except InstanceError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        sess = Session(
            id=uuid.uuid4().hex,
            instance=inst,
            state=dynamics.initial_state(inst),
        )
        with registry_lock:
            sessions[sess.id] = sess
        return sess.snapshot()

    @app.post("/sessions/{session_id}/actions")
    async def apply_action(session_id: str, body: dict):
        sess = get_session(session_id)
        try:
            train, route = body["train"], body["elementary_route"]
        except (KeyError, TypeError):
            raise HTTPException(
                status_code=400, detail="body needs train and elementary_route"
            )
        with sess.lock:
            new_state = dynamics.apply_action(sess.instance, sess.state, train, route)
            sess.undo_stack.append(sess.state)
            sess.state = new_state
            sess.history.append({"train": train, "elementary_route": route})
            return sess.snapshot()

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str):
        sess = get_session(session_id)
        with sess.lock:
            return sess.snapshot()

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        sess = get_session(session_id)
        with sess.lock:
            if not sess.undo_stack:
                raise HTTPException(status_code=409, detail="nothing to undo")
            sess.state = sess.undo_stack.pop()
            sess.history.pop()
            return sess.snapshot()

    return app


app = create_app()
