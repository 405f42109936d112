"""Partially filled arrays and the primitive manipulations built on them.

Row and column indices are 1-based throughout.  Positions passed to
:meth:`PartiallyFilledArray.get` and :func:`place_block` reduce cyclically,
row indices modulo ``m`` into ``1..m`` and column indices modulo ``n`` into
``1..n``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .errors import NonSquare, OutOfBounds, Overlap, ParamMismatch, BadRelativeParams, ZeroEntry

Cell = Optional[int]


class CellPosition(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class PartiallyFilledArray:
    """An ``m x n`` grid whose cells are either ``None`` (empty) or an int."""

    cells: tuple

    def __post_init__(self):
        cells = tuple(tuple(r) for r in self.cells)
        if not cells or not cells[0]:
            raise ValueError("an array needs at least one row and one column")
        width = len(cells[0])
        for r in cells:
            if len(r) != width:
                raise ValueError("ragged rows")
            for x in r:
                if x is not None and (isinstance(x, bool) or not isinstance(x, int)):
                    raise TypeError(f"entries must be int or None, got {x!r}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def empty(cls, m: int, n: int) -> "PartiallyFilledArray":
        return cls(tuple((None,) * n for _ in range(m)))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[Cell]]) -> "PartiallyFilledArray":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_entries(cls, m: int, n: int, entries) -> "PartiallyFilledArray":
        """Build from ``{(i, j): value}`` or an iterable of ``(i, j, value)``."""
        grid = [[None] * n for _ in range(m)]
        items = entries.items() if hasattr(entries, "items") else (((i, j), v) for i, j, v in entries)
        for (i, j), v in items:
            r, c = (i - 1) % m, (j - 1) % n
            if grid[r][c] is not None:
                raise Overlap(f"cell ({r + 1},{c + 1}) given twice")
            grid[r][c] = v
        return cls(tuple(tuple(r) for r in grid))

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0])

    @property
    def shape(self) -> tuple:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def get(self, i: int, j: int) -> Cell:
        return self.cells[(i - 1) % self.rows][(j - 1) % self.cols]

    def __getitem__(self, pos) -> Cell:
        i, j = pos
        return self.get(i, j)

    def filled(self) -> Iterator[tuple]:
        """Yield ``(i, j, value)`` for every filled cell in row-major order."""
        for i, row in enumerate(self.cells, 1):
            for j, x in enumerate(row, 1):
                if x is not None:
                    yield i, j, x

    def skeleton(self) -> frozenset:
        return frozenset(CellPosition(i, j) for i, j, _ in self.filled())

    @cached_property
    def _row_lines(self) -> tuple:
        return tuple(tuple(x for x in r if x is not None) for r in self.cells)

    @cached_property
    def _col_lines(self) -> tuple:
        return tuple(tuple(x for x in c if x is not None) for c in zip(*self.cells))

    def row(self, i: int) -> list:
        """Filled entries of row ``i`` from left to right."""
        return list(self._row_lines[(i - 1) % self.rows])

    def col(self, j: int) -> list:
        return list(self._col_lines[(j - 1) % self.cols])

    def row_sums(self) -> list:
        return [sum(r) for r in self._row_lines]

    def col_sums(self) -> list:
        return [sum(c) for c in self._col_lines]

    def row_counts(self) -> list:
        return [len(r) for r in self._row_lines]

    def col_counts(self) -> list:
        return [len(c) for c in self._col_lines]

    @property
    def size(self) -> int:
        """Number of filled cells."""
        return sum(x is not None for r in self.cells for x in r)

    def map_entries(self, fn) -> "PartiallyFilledArray":
        return PartiallyFilledArray(tuple(tuple(None if x is None else fn(x) for x in r) for r in self.cells))

    def to_lists(self) -> list:
        return [list(r) for r in self.cells]

    def __str__(self) -> str:
        width = max((len(str(x)) for _, _, x in self.filled()), default=1)
        return "\n".join(" ".join(("." if x is None else str(x)).rjust(width) for x in r) for r in self.cells)


@dataclass(frozen=True)
class DesignParams:
    """Parameters ``(m, n, s, k)`` and, for relative arrays, ``t`` and ``lam``."""

    m: int
    n: int
    s: int
    k: int
    t: Optional[int] = None
    lam: Optional[int] = None

    @property
    def d(self) -> int:
        return gcd(self.s, self.k)

    @property
    def c(self) -> int:
        return gcd(self.m, self.n)

    @property
    def nk(self) -> int:
        return self.n * self.k

    @property
    def is_relative(self) -> bool:
        return self.t is not None or self.lam is not None

    @property
    def v(self) -> int:
        t = self.t or 1
        lam = self.lam or 1
        return 2 * self.nk // lam + t

    @property
    def ell(self) -> int:
        return self.v // (self.t or 1)

    def check(self, minimum: int = 3) -> "DesignParams":
        """Raise :class:`ParamMismatch` unless the basic existence bounds hold."""
        m, n, s, k = self.m, self.n, self.s, self.k
        if min(m, n, s, k) < 1:
            raise ParamMismatch(f"parameters must be positive: {self}")
        if m * s != n * k:
            raise ParamMismatch(f"ms != nk for (m,n,s,k)=({m},{n},{s},{k})")
        if not (minimum <= s <= n and minimum <= k <= m):
            raise ParamMismatch(f"need {minimum} <= s <= n and {minimum} <= k <= m, got ({m},{n},{s},{k})")
        if self.is_relative:
            t, lam = self.t or 1, self.lam or 1
            if (2 * self.nk) % lam:
                raise BadRelativeParams(f"lambda={lam} does not divide 2nk={2 * self.nk}")
            if (2 * self.nk // lam) % t:
                raise BadRelativeParams(f"t={t} does not divide 2nk/lambda={2 * self.nk // lam}")
        return self

    def transposed(self) -> "DesignParams":
        return DesignParams(self.n, self.m, self.k, self.s, self.t, self.lam)

    @classmethod
    def square(cls, a: int, b: int, **kw) -> "DesignParams":
        return cls(a, a, b, b, **kw)


def support(A: PartiallyFilledArray) -> Counter:
    """Multiset of absolute values of the filled cells."""
    return Counter(abs(x) for _, _, x in A.filled())


def entry_list(A: PartiallyFilledArray) -> list:
    """Entries of the filled cells in row-major order."""
    return [x for _, _, x in A.filled()]


@dataclass(frozen=True)
class DiagonalProfile:
    """Which diagonals ``D_r`` (``j - i = r mod n``) carry filled cells."""

    indices: frozenset
    size: int
    full: bool
    start: Optional[int]

    @property
    def consecutive(self) -> bool:
        return self.start is not None

    def is_cyclically(self, b: int) -> bool:
        """True iff the filled cells are exactly ``b`` consecutive full diagonals."""
        return self.consecutive and self.full and len(self.indices) == b


def diagonal_indices(A: PartiallyFilledArray) -> DiagonalProfile:
    if not A.is_square:
        raise NonSquare(f"diagonals need a square array, got {A.rows}x{A.cols}")
    n = A.rows
    counts = Counter((j - i) % n for i, j, _ in A.filled())
    idx = frozenset(counts)
    full = all(c == n for c in counts.values())
    start = None
    if not idx:
        start = None
    elif len(idx) == n:
        start = 0
    else:
        # the run starts at the unique r in idx with r-1 not in idx
        starts = [r for r in idx if (r - 1) % n not in idx]
        if len(starts) == 1:
            start = starts[0]
    return DiagonalProfile(idx, n, full, start)


def is_shiftable(A: PartiallyFilledArray) -> bool:
    """Every row and column holds equally many positive and negative entries.

    A zero entry counts as neither sign and therefore breaks balance.
    """
    lines = [A.row(i) for i in range(1, A.rows + 1)] + [A.col(j) for j in range(1, A.cols + 1)]
    for line in lines:
        pos = sum(x > 0 for x in line)
        neg = sum(x < 0 for x in line)
        if pos != neg or pos + neg != len(line):
            return False
    return True


def shift(A: PartiallyFilledArray, x: int) -> PartiallyFilledArray:
    """``A +- x``: add ``x`` to positive entries and ``-x`` to negative ones."""
    if x < 0:
        raise ValueError("shift amount must be nonnegative")
    if any(e == 0 for _, _, e in A.filled()):
        raise ZeroEntry("cannot shift an array containing 0")
    return A.map_entries(lambda e: e + x if e > 0 else e - x)


def transpose(A: PartiallyFilledArray) -> PartiallyFilledArray:
    return PartiallyFilledArray(tuple(zip(*A.cells)))


def place_block(target: PartiallyFilledArray, block: PartiallyFilledArray, row_offset: int, col_offset: int,
                wrap: bool = True) -> PartiallyFilledArray:
    """Copy the filled cells of ``block`` into ``target`` shifted by the offsets.

    Cell ``(a, b)`` of the block lands on ``(a + row_offset, b + col_offset)``.
    """
    m, n = target.shape
    grid = [list(r) for r in target.cells]
    for a, b, x in block.filled():
        i, j = a + row_offset, b + col_offset
        if not wrap and not (1 <= i <= m and 1 <= j <= n):
            raise OutOfBounds(f"block cell ({a},{b}) maps outside {m}x{n} at ({i},{j})")
        r, c = (i - 1) % m, (j - 1) % n
        if grid[r][c] is not None:
            raise Overlap(f"cell ({r + 1},{c + 1}) is already filled")
        grid[r][c] = x
    return PartiallyFilledArray(tuple(tuple(r) for r in grid))


def rotate_columns(A: PartiallyFilledArray, r: int) -> PartiallyFilledArray:
    """Relabel columns ``j -> j + r`` cyclically."""
    n = A.cols
    return PartiallyFilledArray(tuple(tuple(row[(j - r) % n] for j in range(n)) for row in A.cells))


def vstack(*blocks: PartiallyFilledArray) -> PartiallyFilledArray:
    width = blocks[0].cols
    if any(b.cols != width for b in blocks):
        raise ParamMismatch("stacked blocks must share a width")
    return PartiallyFilledArray(tuple(r for b in blocks for r in b.cells))


def hstack(*blocks: PartiallyFilledArray) -> PartiallyFilledArray:
    height = blocks[0].rows
    if any(b.rows != height for b in blocks):
        raise ParamMismatch("side-by-side blocks must share a height")
    return PartiallyFilledArray(tuple(sum((b.cells[i] for b in blocks), ()) for i in range(height)))
