"""Square-to-rectangle reduction.

A square array of side ``nk/d`` whose filled cells are ``d = gcd(s, k)``
consecutive diagonals is folded onto an ``m x n`` grid by reducing the row
index modulo ``m`` and the column index modulo ``n``.  Rows of the result are
unions of ``s/d`` source rows and columns are unions of ``k/d`` source
columns, so zero (or constant) line sums and the entry list carry over.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import (CellPosition, DesignParams, PartiallyFilledArray, diagonal_indices,
                   rotate_columns)
from .errors import CollisionDetected, NotDiagonal, ParamMismatch


@dataclass(frozen=True)
class ReductionPlan:
    m: int
    n: int
    s: int
    k: int

    @property
    def d(self) -> int:
        return gcd(self.s, self.k)

    @property
    def s_bar(self) -> int:
        return self.s // self.d

    @property
    def k_bar(self) -> int:
        return self.k // self.d

    @property
    def c(self) -> int:
        return gcd(self.m, self.n)

    @property
    def source_side(self) -> int:
        return self.n * self.k // self.d

    @classmethod
    def for_params(cls, params) -> "ReductionPlan":
        p = params if isinstance(params, DesignParams) else DesignParams(*params)
        plan = cls(p.m, p.n, p.s, p.k)
        if p.m * p.s != p.n * p.k:
            raise ParamMismatch(f"ms != nk for ({p.m},{p.n},{p.s},{p.k})")
        if not (2 <= p.s <= p.n and 2 <= p.k <= p.m):
            raise ParamMismatch(f"reduction needs 2 <= s <= n and 2 <= k <= m, got ({p.m},{p.n},{p.s},{p.k})")
        # c = n / s_bar = m / k_bar and the side equals both n*k_bar and m*s_bar
        assert plan.n * plan.k_bar == plan.m * plan.s_bar == plan.source_side
        return plan


def psi(i: int, j: int, m: int, n: int) -> CellPosition:
    return CellPosition((i - 1) % m + 1, (j - 1) % n + 1)


def normalize_diagonals(A: PartiallyFilledArray, d: int) -> PartiallyFilledArray:
    """Rotate columns so the ``d`` filled diagonals become ``D_0 .. D_{d-1}``."""
    prof = diagonal_indices(A)
    if not prof.is_cyclically(d):
        raise NotDiagonal(f"array is not cyclically {d}-diagonal (diagonals {sorted(prof.indices)})")
    if prof.start == 0:
        return A
    return rotate_columns(A, -prof.start)


def reduce(A: PartiallyFilledArray, params) -> PartiallyFilledArray:
    plan = ReductionPlan.for_params(params)
    if A.shape != (plan.source_side, plan.source_side):
        raise ParamMismatch(f"source must be {plan.source_side}x{plan.source_side}, got {A.rows}x{A.cols}")
    A = normalize_diagonals(A, plan.d)
    m, n = plan.m, plan.n
    grid = [[None] * n for _ in range(m)]
    for i, j, x in A.filled():
        u, v = psi(i, j, m, n)
        if grid[u - 1][v - 1] is not None:
            raise CollisionDetected(f"cells collide at ({u},{v})")
        grid[u - 1][v - 1] = x
    return PartiallyFilledArray(tuple(tuple(r) for r in grid))
