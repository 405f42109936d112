"""Diagonal signed magic squares.

``sma3_diag_odd``, ``sma3_diag_even``, ``sma5_diag_odd`` and ``sma6_diag`` fill
the diagonals ``D_0 .. D_{b-1}`` row by row from closed formulas.
:func:`compose_diagonal` widens a diagonal base by overlaying shifted copies
of a shiftable 4-diagonal square, and :func:`sma_shiftable_rect` stacks a
shiftable square on top of a shifted shiftable rectangle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import (DesignParams, PartiallyFilledArray, diagonal_indices, is_shiftable, rotate_columns,
                   shift, transpose, vstack)
from .errors import BadParam, IngredientUnavailable, Overlap
from .verify import verify_diagonal, verify_integer_heffter, verify_sma


@dataclass(frozen=True)
class DiagonalSmaSpec:
    a: int
    b: int
    shiftable_required: bool = False

    def __post_init__(self):
        if not self.a >= self.b >= 3:
            raise BadParam(f"need a >= b >= 3, got a={self.a}, b={self.b}")


def _from_cells(a, cells) -> PartiallyFilledArray:
    return PartiallyFilledArray.from_entries(a, a, cells)


def sma3_diag_odd(a: int) -> PartiallyFilledArray:
    if a < 3 or a % 2 == 0:
        raise BadParam(f"sma3_diag_odd needs odd a >= 3, got {a}")
    g = (a - 1) // 2
    cells = {}
    for l in range(g + 1):
        i = 1 + 2 * l
        cells[i, i] = -(2 * g + 1) + l
        cells[i, i + 1] = g - 2 * l
        cells[i, i + 2] = (g + 1) + l
    for l in range(g):
        i = 2 + 2 * l
        cells[i, i] = -(3 * g + 1) + l
        cells[i, i + 1] = (g - 1) - 2 * l
        cells[i, i + 2] = (2 * g + 2) + l
    return _from_cells(a, cells)


def sma3_diag_even(a: int) -> PartiallyFilledArray:
    if a < 6 or a % 4 != 2:
        raise BadParam(f"sma3_diag_even needs a >= 6 with a = 2 mod 4, got {a}")
    g = (a - 2) // 4
    cells = {(1, 1): -(3 * g + 2), (1, 2): 1, (1, 3): 3 * g + 1}
    for l in range(g):
        i = 2 + 2 * l
        cells[i, i] = -(5 * g + 4) - l
        cells[i, i + 1] = 3 + 2 * l
        cells[i, i + 2] = (5 * g + 1) - l
    for l in range(g - 1):
        i = 3 + 2 * l
        cells[i, i] = -(3 * g + 4) - l
        cells[i, i + 1] = 4 + 2 * l
        cells[i, i + 2] = 3 * g - l
    i = 2 * g + 1
    cells[i, i], cells[i, i + 1], cells[i, i + 2] = -(4 * g + 3), 2, 4 * g + 1
    for l in range(g):
        i = 2 * g + 2 + 2 * l
        cells[i, i] = -(4 * g + 4) - l
        cells[i, i + 1] = -(2 * g - 1) + 2 * l
        cells[i, i + 2] = (6 * g + 3) - l
    for l in range(g - 1):
        i = 2 * g + 3 + 2 * l
        cells[i, i] = -(2 * g + 2) - l
        cells[i, i + 1] = -(2 * g - 2) + 2 * l
        cells[i, i + 2] = 4 * g - l
    cells[a - 1, a - 1], cells[a - 1, a], cells[a - 1, 1] = -(3 * g + 1), -(2 * g + 1), 5 * g + 2
    cells[a, a], cells[a, 1], cells[a, 2] = -(3 * g + 3), -2 * g, 5 * g + 3
    return _from_cells(a, cells)


def sma5_diag_odd(a: int) -> PartiallyFilledArray:
    if a < 5 or a % 2 == 0:
        raise BadParam(f"sma5_diag_odd needs odd a >= 5, got {a}")
    g = (a - 1) // 2
    cells = {}
    for j, x in enumerate((-(5 * g + 2), -(g + 1), g, g + 2, 4 * g + 1)):
        cells[1, 1 + j] = x
    for l in range(g):
        i = 2 + 2 * l
        row = (-(4 * g + 2) - l, -(3 * g + 1) + 2 * l, (g - 1) - 2 * l, (g + 3) + 2 * l, (5 * g + 1) - l)
        for j, x in enumerate(row):
            cells[i, i + j] = x
    for l in range(g - 1):
        i = 3 + 2 * l
        row = (-(3 * g + 2) - l, -3 * g + 2 * l, (g - 2) - 2 * l, (g + 4) + 2 * l, 4 * g - l)
        for j, x in enumerate(row):
            cells[i, i + j] = x
    for j, x in enumerate((-(4 * g + 1), -(g + 2), -g, g + 1, 5 * g + 2)):
        cells[a, a + j] = x
    return _from_cells(a, cells)


def sma6_diag(a: int) -> PartiallyFilledArray:
    """Shiftable diagonal SMA(a;6): three positive and three negative entries per line."""
    if a < 6:
        raise BadParam(f"sma6_diag needs a >= 6, got {a}")
    cells = {}
    for l in range(1, a - 2):
        row = (l, a + l, -a - 2 * l, -3 - l, (3 * a - 2) - l, -(3 * a - 5) + 2 * l)
        for j, x in enumerate(row):
            cells[l, l + j] = x
    tail = {
        a - 2: (a - 2, 2 * a - 2, -(3 * a - 4), -1, 3 * a, -(3 * a - 1)),
        a - 1: (a - 1, 2 * a - 1, -(3 * a - 2), -2, 3 * a - 1, -(3 * a - 3)),
        a: (a, 2 * a, -3 * a, -3, 3 * a - 2, -(3 * a - 5)),
    }
    for i, row in tail.items():
        for j, x in enumerate(row):
            cells[i, i + j] = x
    return _from_cells(a, cells)


def _positive_count(A: PartiallyFilledArray) -> int:
    return sum(1 for _, _, x in A.filled() if x > 0)


def compose_diagonal(base: PartiallyFilledArray, block: PartiallyFilledArray, h: int,
                     step: int, offset: int) -> PartiallyFilledArray:
    """Overlay ``h`` shifted copies of a 4-diagonal ``block`` onto ``base``.

    ``base`` must fill exactly ``D_0 .. D_{r-1}`` and ``block`` exactly
    ``D_0 .. D_3``; copy ``j`` is ``block +- (offset + step*j)`` moved onto
    ``D_{r+4j} .. D_{r+4j+3}``.
    """
    if h == 0:
        return base
    a = base.rows
    pb, pq = diagonal_indices(base), diagonal_indices(block)
    if block.shape != base.shape:
        raise BadParam(f"base is {a}x{a} but block is {block.rows}x{block.cols}")
    r = len(pb.indices)
    if not (pb.is_cyclically(r) and pb.start == 0):
        raise BadParam("base must fill D_0..D_{r-1}")
    if not (pq.is_cyclically(4) and pq.start == 0):
        raise BadParam("block must fill D_0..D_3")
    if r + 4 * h > a:
        raise BadParam(f"{r + 4 * h} diagonals do not fit in side {a}")
    if not is_shiftable(block):
        raise BadParam("block must be shiftable")
    grid = [list(row) for row in base.cells]
    for j in range(h):
        copy = rotate_columns(shift(block, offset + step * j), r + 4 * j)
        for i, c, x in copy.filled():
            if grid[i - 1][c - 1] is not None:
                raise Overlap(f"composition collides at ({i},{c})")
            grid[i - 1][c - 1] = x
    return PartiallyFilledArray(tuple(tuple(row) for row in grid))


def compose_diag_sma(A_base: PartiallyFilledArray, b: int, supplier=None, block=None) -> PartiallyFilledArray:
    """Diagonal SMA(a;b) from a diagonal SMA(a;r) base and shiftable SMA(a;4) copies.

    The copies are shifted by ``sigma + 2a*j`` where ``sigma`` is the largest
    absolute value of the base, ``(ar-1)/2`` for odd ``ar`` and ``ar/2``
    otherwise, so supports abut without gaps.
    """
    a = A_base.rows
    prof = diagonal_indices(A_base)
    r = len(prof.indices)
    if not prof.is_cyclically(r):
        raise BadParam("base is not a diagonal array")
    if (b - r) % 4 or b < r:
        raise BadParam(f"b={b} is not r + 4h for r={r}")
    h = (b - r) // 4
    if h == 0:
        return A_base
    if b > a:
        raise BadParam(f"need a >= b, got a={a}, b={b}")
    from .reduction import normalize_diagonals
    base = normalize_diagonals(A_base, r)
    if block is None:
        block = _supplier(supplier).diagonal_sma(a, 4, shiftable=True)
    block = normalize_diagonals(block, 4)
    sigma = (a * r - 1) // 2 if (a * r) % 2 else a * r // 2
    C = compose_diagonal(base, block, h, 2 * a, sigma)
    _require(verify_sma(C, DesignParams.square(a, b)), f"composed SMA({a};{b})")
    _require(verify_diagonal(C, b), f"composed SMA({a};{b})")
    return C


def compose_diag_heffter(A_base: PartiallyFilledArray, b: int, supplier=None, block=None) -> PartiallyFilledArray:
    """Integer diagonal H(a;b) from an integer diagonal H(a;r) and shiftable H(a;4) copies."""
    a = A_base.rows
    prof = diagonal_indices(A_base)
    r = len(prof.indices)
    if not prof.is_cyclically(r) or (b - r) % 4 or b < r:
        raise BadParam(f"cannot widen a {r}-diagonal base to {b} diagonals")
    h = (b - r) // 4
    if h == 0:
        return A_base
    from .reduction import normalize_diagonals
    base = normalize_diagonals(A_base, r)
    if block is None:
        block = _supplier(supplier).diagonal_heffter(a, 4, shiftable=True)
    block = normalize_diagonals(block, 4)
    C = compose_diagonal(base, block, h, 4 * a, a * r)
    _require(verify_integer_heffter(C, DesignParams.square(a, b)), f"composed H({a};{b})")
    return C


def _require(report, what):
    if not report.passed:
        raise AssertionError(f"{what} failed verification:\n{report.summary()}")


def _supplier(supplier):
    if supplier is None:
        from .solver.supplier import default_supplier
        supplier = default_supplier()
    return supplier


def sma_diag(a: int, b: int, shiftable_required: bool = False, supplier=None) -> PartiallyFilledArray:
    """A diagonal SMA(a;b) filling ``D_0 .. D_{b-1}``; shiftable when asked (``b`` even)."""
    DiagonalSmaSpec(a, b, shiftable_required)
    if shiftable_required and b % 2:
        raise BadParam("a shiftable SMA needs an even number of cells per line")
    return _sma_diag(a, b, shiftable_required, _supplier(supplier))


# results are immutable and depend only on the arguments and the supplier's
# sources, so one cache entry per supplier object is safe
@lru_cache(maxsize=1024)
def _sma_diag(a: int, b: int, shiftable_required: bool, sup) -> PartiallyFilledArray:
    A = None
    if b == 3 and a % 2 == 1:
        A = sma3_diag_odd(a)
    elif b == 3 and a % 4 == 2:
        A = sma3_diag_even(a)
    elif b == 5 and a % 2 == 1:
        A = sma5_diag_odd(a)
    elif b == 6:
        A = sma6_diag(a)
    elif b == 4:
        A = sup.diagonal_sma(a, 4, shiftable=True)
    else:
        r = {1: 5, 2: 6, 3: 3, 0: 4}[b % 4]
        if r == 3 and a % 4 == 0 or r == 5 and a % 2 == 0:
            # no direct base in this package; try a whole-array ingredient first
            try:
                A = sup.diagonal_sma(a, b, shiftable=shiftable_required)
            except IngredientUnavailable:
                base = sup.diagonal_sma(a, r)
                A = compose_diag_sma(base, b, sup)
        else:
            base = sma_diag(a, r, shiftable_required, sup)
            A = compose_diag_sma(base, b, sup)
    from .reduction import normalize_diagonals
    A = normalize_diagonals(A, b)
    _require(verify_sma(A, DesignParams.square(a, b)), f"SMA({a};{b})")
    _require(verify_diagonal(A, b), f"SMA({a};{b})")
    if shiftable_required and not is_shiftable(A):
        raise IngredientUnavailable(f"no shiftable diagonal SMA({a};{b}) available", "shiftable_diagonal_sma")
    return A


def sma_shiftable_rect(m: int, n: int, s: int, k: int, supplier=None) -> PartiallyFilledArray:
    """A shiftable SMA(m,n;s,k) for even ``s`` and ``k``.

    For ``m > n`` a shiftable diagonal SMA(n;s) is stacked over a shiftable
    SMA(m-n,n;s,k-s) shifted by ``ns/2``; ``m < n`` is handled by transposing.
    """
    if s % 2 or k % 2:
        raise BadParam("both s and k must be even")
    DesignParams(m, n, s, k).check()
    if m < n:
        return transpose(sma_shiftable_rect(n, m, k, s, supplier))
    sup = _supplier(supplier)
    A1 = sma_diag(n, s, True, sup)
    if m == n:
        return A1
    A2 = sup.shiftable_rect_sma(m - n, n, s, k - s)
    A = vstack(A1, shift(A2, n * s // 2))
    _require(verify_sma(A, DesignParams(m, n, s, k)), f"stacked SMA({m},{n};{s},{k})")
    if not is_shiftable(A):
        raise AssertionError("stacked SMA lost shiftability")
    return A
