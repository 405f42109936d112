"""Shiftable 4-diagonal squares of any side by chaining small seed squares.

Each seed is a shiftable diagonal array on ``D_0 .. D_3`` of side 4, 5, 6 or
7.  A 4-diagonal square of side ``a`` has six cells that wrap around the right
edge; in local 0-based coordinates they are

    (a-3, 0), (a-1, 0)                  kept in their row
    (a-2, 0), (a-2, 1), (a-1, 1), (a-1, 2)  kept in their column

When seeds are laid along the main diagonal of a bigger square, the first two
move to the columns of the next seed and the other four move to the rows of
the previous seed.  Line sums survive the move as long as every seed has the
same three pair sums ``c30+c10``, ``c20+c21`` and ``c11+c12`` and each pair
has one positive and one negative entry, because then the extra shift carried
by a foreign pair cancels.  Seed ``t`` is shifted by ``unit * (a_0 + ... +
a_{t-1})`` so supports tile ``[1, unit*a]`` (``unit`` is 4 for integer Heffter
arrays and 2 for signed magic arrays).
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from ..core import PartiallyFilledArray
from ..errors import BadParam

UNITS = {"integer_heffter": 4, "sma": 2}
SEED_SIDES = (4, 5, 6, 7)

_STRAIGHT = ((3, 0), (1, 0))          # (a - x, col)
_CROSSED = ((2, 0), (2, 1), (1, 1), (1, 2))


@lru_cache(maxsize=None)
def seeds(kind: str) -> dict:
    """Seed grids by side for ``kind``; all share the same corner pair sums."""
    if kind not in UNITS:
        raise BadParam(f"no glue seeds for kind {kind!r}")
    text = resources.files("heffter").joinpath("fixtures/glue4.json").read_text(encoding="utf-8")
    blocks = json.loads(text)[kind]["blocks"]
    return {int(a): tuple(tuple(r) for r in grid) for a, grid in blocks.items()}


def corner_pairs(grid, a: int) -> tuple:
    g = lambda x, j: grid[a - x][j]
    return (g(3, 0) + g(1, 0), g(2, 0) + g(2, 1), g(1, 1) + g(1, 2))


def split_side(a: int) -> list:
    """Seed sides summing to ``a`` (fours, then one seed of side 4..7)."""
    if a < 4:
        raise BadParam(f"side {a} is below the smallest seed")
    fours = (a - 4) // 4
    return [4] * fours + [a - 4 * fours]


def glue(kind: str, a: int) -> PartiallyFilledArray:
    """Shiftable diagonal array of side ``a`` on ``D_0 .. D_3``."""
    unit = UNITS.get(kind)
    if unit is None:
        raise BadParam(f"no glue construction for kind {kind!r}")
    table = seeds(kind)
    sides = split_side(a)
    grid = [[None] * a for _ in range(a)]
    offset = 0
    for side in sides:
        seed = table[side]
        lift = unit * offset
        for i in range(side):
            for r in range(4):
                j = i + r
                x = seed[i][j % side]
                x = x + lift if x > 0 else x - lift
                if j < side:
                    row, col = offset + i, offset + j
                elif (side - i, j - side) in _STRAIGHT:
                    row, col = offset + i, (offset + j) % a
                else:
                    row, col = (offset + i - side) % a, offset + j - side
                grid[row][col] = x
        offset += side
    return PartiallyFilledArray.from_rows(grid)
