"""Incremental SAT backend contract and concrete adapters.

Literals are nonzero ints, DIMACS style: the variable index with sign
giving polarity.  Clauses persist for a solver's lifetime; assumptions
hold for a single solve call only.

Backends:
  * ``bridge``  -- the bundled CaDiCaL subprocess (satbridge/), the
    production backend.
  * ``internal`` -- the pure-Python CDCL in :mod:`railock.cdcl`, hermetic
    but slow; fine for small instances and CI without the bridge binary.

Selection: explicit argument, else RAILOCK_SAT_BACKEND, else the bridge
when its binary can be found, else internal.
"""

from __future__ import annotations

import os
import shutil
import subprocess
import time
from dataclasses import dataclass
from pathlib import Path

from .cdcl import Cdcl

Lit = int


@dataclass(frozen=True)
class Sat:
    model: list[bool]  # indexed by variable, entry 0 unused

    def __getitem__(self, var: int) -> bool:
        return self.model[var] if var < len(self.model) else False


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class TimedOut:
    pass


SolveResult = Sat | Unsat | TimedOut


class SolverHandle:
    """One incremental solving session, confined to a single thread."""

    def add_clause(self, lits: list[Lit]) -> None:
        raise NotImplementedError

    def solve_under(self, assumptions: list[Lit] = (), deadline: float | None = None) -> SolveResult:
        """``deadline`` is an absolute time.monotonic() timestamp."""
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class InternalSolver(SolverHandle):
    def __init__(self) -> None:
        self._cdcl = Cdcl()
        self._nvars = 0

    def add_clause(self, lits: list[Lit]) -> None:
        self._nvars = max(self._nvars, *(abs(l) for l in lits), 0) if lits else self._nvars
        self._cdcl.add_clause(list(lits))

    def solve_under(self, assumptions: list[Lit] = (), deadline: float | None = None) -> SolveResult:
        self._nvars = max([self._nvars, *(abs(l) for l in assumptions)])
        res = self._cdcl.solve(list(assumptions), deadline)
        if res is None:
            return TimedOut()
        if res is False:
            return Unsat()
        model = res + [False] * (self._nvars + 1 - len(res))
        return Sat(model=model)


class BridgeSolver(SolverHandle):
    """Adapter for the CaDiCaL line-protocol subprocess."""

    def __init__(self, binary: str | None = None) -> None:
        binary = binary or find_bridge_binary()
        if binary is None:
            raise FileNotFoundError(
                "satbridge binary not found; build it with "
                "`cargo build --release` in satbridge/ or set RAILOCK_SATBRIDGE"
            )
        self._proc = subprocess.Popen(
            [binary],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1 << 20,
        )
        self._nvars = 0

    def add_clause(self, lits: list[Lit]) -> None:
        for l in lits:
            self._nvars = max(self._nvars, abs(l))
        self._proc.stdin.write("a " + " ".join(map(str, lits)) + " 0\n")

    def solve_under(self, assumptions: list[Lit] = (), deadline: float | None = None) -> SolveResult:
        for l in assumptions:
            self._nvars = max(self._nvars, abs(l))
        if deadline is None:
            ms = 1 << 31
        else:
            ms = max(0, int((deadline - time.monotonic()) * 1000))
        line = f"s {ms} " + " ".join(map(str, assumptions)) + " 0\n"
        self._proc.stdin.write(line)
        self._proc.stdin.flush()
        verdict = self._proc.stdout.readline().strip()
        if verdict == "UNSAT":
            return Unsat()
        if verdict == "UNKNOWN":
            return TimedOut()
        if verdict != "SAT":
            raise RuntimeError(f"satbridge protocol error: {verdict!r}")
        vline = self._proc.stdout.readline().split()
        model = [False] * (self._nvars + 1)
        for tok in vline[1:-1]:
            l = int(tok)
            if abs(l) < len(model):
                model[abs(l)] = l > 0
        return Sat(model=model)

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.write("q\n")
                self._proc.stdin.flush()
            except (BrokenPipeError, ValueError):
                pass
            self._proc.wait(timeout=5)

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass


def find_bridge_binary() -> str | None:
    env = os.environ.get("RAILOCK_SATBRIDGE")
    if env and Path(env).is_file():
        return env
    here = Path(__file__).resolve()
    for root in [*here.parents, Path.cwd()]:
        for profile in ("release", "debug"):
            cand = root / "satbridge" / "target" / profile / "railock-satbridge"
            if cand.is_file():
                return str(cand)
    return shutil.which("railock-satbridge")


def make_solver(backend: str | None = None) -> SolverHandle:
    backend = backend or os.environ.get("RAILOCK_SAT_BACKEND", "auto")
    if backend == "internal":
        return InternalSolver()
    if backend == "bridge":
        return BridgeSolver()
    if backend == "auto":
        return BridgeSolver() if find_bridge_binary() else InternalSolver()
    raise ValueError(f"unknown SAT backend {backend!r}")
