import pytest

from railock.sat import (
    BridgeSolver,
    InternalSolver,
    Sat,
    TimedOut,
    Unsat,
    find_bridge_binary,
    make_solver,
)

BACKENDS = ["internal"] + (["bridge"] if find_bridge_binary() else [])


@pytest.fixture(params=BACKENDS)
def solver(request):
    with make_solver(request.param) as s:
        yield s


def test_sat_simple(solver):
    solver.add_clause([1, 2])
    solver.add_clause([-1])
    res = solver.solve_under([])
    assert isinstance(res, Sat)
    assert res[2] is True and res[1] is False


def test_unsat_simple(solver):
    solver.add_clause([1])
    solver.add_clause([-1])
    assert isinstance(solver.solve_under([]), Unsat)


def test_assumptions_are_transient(solver):
    solver.add_clause([1, 2])
    assert isinstance(solver.solve_under([-1, -2]), Unsat)
    # The assumptions do not persist: the formula is still satisfiable.
    assert isinstance(solver.solve_under([]), Sat)


def test_incremental_clause_addition(solver):
    solver.add_clause([1, 2])
    assert isinstance(solver.solve_under([]), Sat)
    solver.add_clause([-1])
    solver.add_clause([-2])
    assert isinstance(solver.solve_under([]), Unsat)


def test_model_indexing_beyond_range(solver):
    solver.add_clause([1])
    res = solver.solve_under([])
    assert res[1] is True
    assert res[999] is False  # unallocated variables read as false


def test_make_solver_env(monkeypatch):
    monkeypatch.setenv("RAILOCK_SAT_BACKEND", "internal")
    assert isinstance(make_solver(), InternalSolver)


def test_make_solver_explicit_overrides_env(monkeypatch):
    monkeypatch.setenv("RAILOCK_SAT_BACKEND", "bridge")
    assert isinstance(make_solver("internal"), InternalSolver)


def test_make_solver_unknown():
    with pytest.raises(ValueError):
        make_solver("cadical9000")


@pytest.mark.skipif(not find_bridge_binary(), reason="bridge binary not built")
def test_bridge_timeout():
    with make_solver("bridge") as s:
        # Pigeonhole large enough that 1 ms is never sufficient.
        n_p, n_h = 12, 11
        var = lambda p, h: p * n_h + h + 1
        for p in range(n_p):
            s.add_clause([var(p, h) for h in range(n_h)])
        for h in range(n_h):
            for p1 in range(n_p):
                for p2 in range(p1 + 1, n_p):
                    s.add_clause([-var(p1, h), -var(p2, h)])
        import time

        res = s.solve_under([], deadline=time.monotonic() + 0.001)
        assert isinstance(res, (TimedOut, Unsat))


@pytest.mark.skipif(not find_bridge_binary(), reason="bridge binary not built")
def test_backends_agree_on_mixed_formulas():
    import random

    rng = random.Random(3)
    for _ in range(20):
        nvars = rng.randint(3, 12)
        clauses = [
            [rng.choice([-1, 1]) * rng.randint(1, nvars)
             for _ in range(rng.randint(1, 3))]
            for _ in range(rng.randint(2, 30))
        ]
        answers = []
        for backend in ("internal", "bridge"):
            with make_solver(backend) as s:
                for cl in clauses:
                    s.add_clause(list(cl))
                answers.append(isinstance(s.solve_under([]), Sat))
        assert answers[0] == answers[1]
