"""Bounded backtracking search for small arrays and ingredients.

The kernel is compiled with Cython when the extension is available and falls
back to an equivalent pure-Python loop otherwise.  Set ``HEFFTER_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import importlib
import os
import time
from dataclasses import replace

from . import _pysearch
from .problem import (BUDGET, FOUND, SKELETONS, STATUS_NAMES, UNSAT, CompiledProblem,
                      SearchConstraints, SearchOutcome, compile_problem, decode, skeleton_cells)

def _load_compiled():
    if os.environ.get("HEFFTER_PURE_PYTHON"):
        return None
    try:
        return importlib.import_module(".solver._csearch", "heffter")
    except ImportError:
        return None


_csearch = _load_compiled()

BACKEND = "cython" if _csearch is not None else "python"
BACKENDS = ("python", "cython") if _csearch is not None else ("python",)


def _kernel(backend: str):
    if backend == "python":
        return _pysearch.run
    if backend == "cython":
        if _csearch is None:
            raise RuntimeError("the compiled search kernel is not built")
        return _csearch.run
    raise ValueError(f"unknown backend {backend!r}")


def solve(constraints: SearchConstraints, backend: str | None = None) -> SearchOutcome:
    """Run one bounded search.  Found arrays are always re-verified."""
    backend = backend or BACKEND
    prob = compile_problem(constraints)
    t0 = time.perf_counter()
    status, values, nodes, depth = _kernel(backend)(
        prob.as_tuple(), int(constraints.node_budget), float(constraints.time_budget))
    elapsed = time.perf_counter() - t0
    out = SearchOutcome(STATUS_NAMES[status], None, nodes, depth, elapsed, backend)
    if status == 0:
        out.array = decode(constraints, prob, values)
        _check(constraints, out.array)
    return out


def _check(c: SearchConstraints, A) -> None:
    from ..core import is_shiftable
    from ..verify import verify_diagonal, verify_kind

    report = verify_kind(c.kind, A, c.params)
    if c.resolved_skeleton == "diagonal":
        report.violations += verify_diagonal(A, c.s).violations
    if c.shiftable and not is_shiftable(A):
        report.add("Shiftability", "array", "search result is not shiftable")
    if not report.passed:
        raise AssertionError(f"search kernel produced an invalid array:\n{report.summary()}")


def solve_with_restarts(constraints: SearchConstraints, attempts: int = 8,
                        backend: str | None = None) -> SearchOutcome:
    """Split the budget over several seeded runs; stop at the first definite answer."""
    attempts = max(1, attempts)
    per_nodes = max(1, constraints.node_budget // attempts)
    per_secs = constraints.time_budget / attempts
    total_nodes, total_time = 0, 0.0
    last = None
    for i in range(attempts):
        c = replace(constraints, node_budget=per_nodes, time_budget=per_secs,
                    seed=(constraints.seed or 0) + i)
        last = solve(c, backend)
        total_nodes += last.nodes
        total_time += last.elapsed
        if last.verdict != BUDGET:
            break
    last.nodes, last.elapsed = total_nodes, total_time
    return last


__all__ = [
    "BACKEND", "BACKENDS", "BUDGET", "FOUND", "SKELETONS", "UNSAT", "CompiledProblem",
    "SearchConstraints", "SearchOutcome", "compile_problem", "skeleton_cells", "solve",
    "solve_with_restarts",
]
