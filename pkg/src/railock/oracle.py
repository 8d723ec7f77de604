"""Exhaustive reachability decision for small instances.

Ground truth for verdicts: explicit depth-first search over the
simulation state space, memoized on canonical state keys.  A release-only
transition is explored alongside the allocations so that boundary exits
which unblock other trains are not missed.
"""

from __future__ import annotations

from enum import Enum

from . import dynamics
from .model import ProblemInstance


class OracleResult(Enum):
    LIVE = "live"
    DEAD = "dead"
    BUDGET_EXCEEDED = "budget_exceeded"


def oracle_decide(inst: ProblemInstance, node_budget: int = 1_000_000) -> OracleResult:
    start = dynamics.initial_state(inst)
    visited = {start.key()}
    stack = [start]
    while stack:
        s = stack.pop()
        if dynamics.all_finished(inst, s):
            return OracleResult.LIVE
        succs = [dynamics.step(inst, s, [a]) for a in sorted(dynamics.legal_actions(inst, s))]
        relaxed = dynamics.advance(inst, s)
        if relaxed.key() != s.key():
            succs.append(relaxed)
        for nxt in succs:
            k = nxt.key()
            if k not in visited:
                if len(visited) >= node_budget:
                    return OracleResult.BUDGET_EXCEEDED
                visited.add(k)
                stack.append(nxt)
    return OracleResult.DEAD
