"""Rectangular constructions and the top-level dispatcher.

Block sequences are lists of fully filled 3x4 blocks with zero line sums.
Stacking each block over a shifted filler stack gives ``k x 4`` strips, and
:func:`assemble_columnwise` lays strip ``i`` on rows ``ki+1 .. ki+k`` (read
cyclically) and columns ``4i+1 .. 4i+4``.  The lambda-fold construction pairs
every column of a tight Heffter array with its negative to get ``k x 2``
strips placed the same way.

:func:`construct` picks a route by kind and ``d = gcd(s, k)``: direct
constructions first, then reductions of diagonal squares, then routes that
lean on supplied ingredients.  Transposed parameters are tried as well and
every output is verified before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional

from .core import (DesignParams, PartiallyFilledArray, is_shiftable, shift, transpose, vstack)
from .errors import (BadParam, HeffterError, IngredientUnavailable, NotCovered, NotShiftable, Overlap,
                     ParamMismatch)
from .io import ArrayDocument, Provenance
from .verify import verify_integer_heffter, verify_kind, verify_mr, verify_relative, verify_sma

KINDS = ("heffter", "sma", "mr")


def _block(rows) -> PartiallyFilledArray:
    return PartiallyFilledArray.from_rows(rows)


@dataclass(frozen=True)
class BlockSequence:
    """Blocks of equal width with zero line sums and a declared entry contract.

    ``signed`` selects the contract: ``False`` means the absolute values are
    exactly ``[1, top]``; ``True`` means the entries are exactly ``+-[1, top]``.
    """

    blocks: tuple
    top: int
    signed: bool = False
    name: str = ""

    def __len__(self) -> int:
        return len(self.blocks)

    def __getitem__(self, i) -> PartiallyFilledArray:
        return self.blocks[i]

    def entries(self) -> list:
        return [x for b in self.blocks for _, _, x in b.filled()]

    def check(self) -> "BlockSequence":
        for t, b in enumerate(self.blocks):
            if any(b.row_sums()) or any(b.col_sums()):
                raise AssertionError(f"{self.name} block {t} has a nonzero line sum")
        got = sorted(self.entries())
        if self.signed:
            want = sorted(list(range(1, self.top + 1)) + list(range(-self.top, 0)))
        else:
            want = list(range(1, self.top + 1))
            got = sorted(abs(x) for x in got)
        if got != want:
            raise AssertionError(f"{self.name} entries break the declared contract")
        return self


# -- block sequences ----------------------------------------------------------

def seq_blocks_A1(mu: int) -> BlockSequence:
    """A1, A2, B_0 .. B_{mu-1}, C_0 .. C_{mu-1}; supports tile ``[1, 24mu+24]``."""
    if mu < 0:
        raise BadParam(f"mu must be >= 0, got {mu}")
    u = mu
    A1 = [[4*u + 4, -8*u - 7, 4*u + 5, -2],
          [8*u + 9, 18*u + 18, -14*u - 15, -12*u - 12],
          [-12*u - 13, -10*u - 11, 10*u + 10, 12*u + 14]]
    A2 = [[4*u + 6, 4*u + 3, -1, -8*u - 8],
          [18*u + 17, 18*u + 19, -20*u - 20, -16*u - 16],
          [-22*u - 23, -22*u - 22, 20*u + 21, 24*u + 24]]
    B = [[[8*u + 10 + 2*a, 14*u + 14 - 2*a, -8*u - 11 - 2*a, -14*u - 13 + 2*a],
          [8*u + 5 - 4*a, -4*u - 2 + 4*a, -8*u - 3 + 4*a, 4*u - 4*a],
          [-16*u - 15 + 2*a, -10*u - 12 - 2*a, 16*u + 14 - 2*a, 10*u + 13 + 2*a]] for a in range(mu)]
    C = [[[4*u + 1 - 4*a, -8*u - 6 + 4*a, -4*u + 1 + 4*a, 8*u + 4 - 4*a],
          [18*u + 20 + 2*a, -16*u - 17 - 2*a, -18*u - 21 - 2*a, 16*u + 18 + 2*a],
          [-22*u - 21 + 2*a, 24*u + 23 - 2*a, 22*u + 20 - 2*a, -24*u - 22 + 2*a]] for a in range(mu)]
    blocks = tuple(_block(b) for b in [A1, A2] + B + C)
    return BlockSequence(blocks, 24 * mu + 24, name=f"A1({mu})")


def seq_blocks_A2(nu: int) -> BlockSequence:
    """E1, E2, E3, F_0 .. F_{nu-1}, G_0 .. G_{nu-1}; supports tile ``[1, 24nu+36]``."""
    if nu < 0:
        raise BadParam(f"nu must be >= 0, got {nu}")
    v = nu
    E1 = [[4*v + 1, -4*v - 5, -4*v - 8, 4*v + 12],
          [18*v + 30, -18*v - 28, -18*v - 26, 18*v + 24],
          [-22*v - 31, 22*v + 33, 22*v + 34, -22*v - 36]]
    E2 = [[4*v + 6, -18*v - 25, 4*v + 2, 10*v + 17],
          [8*v + 13, -4*v - 10, 10*v + 18, -14*v - 21],
          [-12*v - 19, 22*v + 35, -14*v - 20, 4*v + 4]]
    E3 = [[4*v + 7, 10*v + 14, 8*v + 11, -22*v - 32],
          [10*v + 15, 4*v + 9, -18*v - 27, 4*v + 3],
          [-14*v - 22, -14*v - 23, 10*v + 16, 18*v + 29]]
    F = [[[4*v - 3 - 4*a, -4*v + 2 + 4*a, -4*v + 1 + 4*a, 4*v - 4*a],
          [18*v + 32 + 2*a, -10*v - 20 - 2*a, -18*v - 31 - 2*a, 10*v + 19 + 2*a],
          [-22*v - 29 + 2*a, 14*v + 18 - 2*a, 22*v + 30 - 2*a, -14*v - 19 + 2*a]] for a in range(nu)]
    G = [[[8*v + 7 - 4*a, -8*v - 9 + 4*a, -8*v - 10 + 4*a, 8*v + 12 - 4*a],
          [8*v + 15 + 2*a, -8*v - 14 - 2*a, -16*v - 25 - 2*a, 16*v + 24 + 2*a],
          [-16*v - 22 + 2*a, 16*v + 23 - 2*a, 24*v + 35 - 2*a, -24*v - 36 + 2*a]] for a in range(nu)]
    blocks = tuple(_block(b) for b in [E1, E2, E3] + F + G)
    return BlockSequence(blocks, 24 * nu + 36, name=f"A2({nu})")


BASE_H3443 = _block([[1, 2, 3, -6], [8, -12, -7, 11], [-9, 10, 4, -5]])


def seq_signed_skolem(mu: int) -> BlockSequence:
    """A, B_0 .. B_{mu-1}, C_0 .. C_{mu-1}; entries are exactly ``+-[1, 12mu+6]``."""
    if mu < 0:
        raise BadParam(f"mu must be >= 0, got {mu}")
    u = mu
    A = [[1, 2, -2, -1],
         [4*u + 3, -(4*u + 6), -(12*u + 3), 12*u + 6],
         [-(4*u + 4), 4*u + 4, 12*u + 5, -(12*u + 5)]]
    B = [[[4*a + 3, 4*a + 5, -(4*a + 5), -(4*a + 3)],
          [4*u + 4*a + 5, -(4*u + 8*a + 12), -(12*u - 8*a - 3), 12*u - 4*a + 4],
          [-(4*u + 8*a + 8), 4*u + 4*a + 7, 12*u - 4*a + 2, -(12*u - 8*a + 1)]] for a in range(mu)]
    C = [[[4*a + 4, 4*a + 6, -(4*a + 6), -(4*a + 4)],
          [4*u + 4*a + 6, -(4*u + 8*a + 14), -(12*u - 8*a - 5), 12*u - 4*a + 3],
          [-(4*u + 8*a + 10), 4*u + 4*a + 8, 12*u - 4*a + 1, -(12*u - 8*a - 1)]] for a in range(mu)]
    blocks = tuple(_block(b) for b in [A] + B + C)
    return BlockSequence(blocks, 12 * mu + 6, signed=True, name=f"A({mu})")


# -- filler stacks ------------------------------------------------------------

Q4 = _block([[1, -2, -3, 4], [-5, 6, 7, -8], [-9, 10, 11, -12], [13, -14, -15, 16]])
Q6 = _block([[1, -14, -3, 16], [-2, 13, 4, -15], [5, -18, -7, 20],
             [-6, 17, 8, -19], [-9, 23, 10, -24], [11, -21, -12, 22]])
Q2 = _block([[1, -2, -3, 4], [-1, 2, 3, -4]])

STACK_VARIANTS = ("V", "W", "Vq2")


def build_filler_stack(h: int, variant: str) -> PartiallyFilledArray:
    """Shiftable width-4 stack with zero line sums.

    ``V``: Q4, Q4+-16, ..., Q4+-16h (support ``[1, 16h+16]``).
    ``W``: Q6, Q4+-24, Q4+-40, ..., Q4+-(16h+8) (support ``[1, 16h+24]``).
    ``Vq2``: Q2, Q2+-4, ..., Q2+-4h (entries ``+-[1, 4h+4]``).
    """
    if h < 0:
        raise BadParam(f"stack height parameter must be >= 0, got {h}")
    if variant == "V":
        parts = [shift(Q4, 16 * j) for j in range(h + 1)]
    elif variant == "W":
        parts = [Q6] + [shift(Q4, 16 * j + 8) for j in range(1, h + 1)]
    elif variant == "Vq2":
        parts = [shift(Q2, 4 * j) for j in range(h + 1)]
    else:
        raise BadParam(f"unknown stack variant {variant!r}; expected one of {STACK_VARIANTS}")
    return vstack(*parts)


# -- assembly -----------------------------------------------------------------

def assemble_columnwise(blocks, m: int, n: int) -> PartiallyFilledArray:
    """Place block ``i`` with its top-left cell at ``(k*i + 1, w*i + 1)``, rows mod ``m``.

    All blocks share the same shape ``k x w`` and their widths must add up to ``n``.
    """
    blocks = list(blocks)
    if not blocks:
        raise ParamMismatch("no blocks to assemble")
    k, w = blocks[0].shape
    if any(b.shape != (k, w) for b in blocks):
        raise ParamMismatch("blocks must share one shape")
    if w * len(blocks) != n:
        raise ParamMismatch(f"{len(blocks)} blocks of width {w} do not fill {n} columns")
    if (k * len(blocks)) % m:
        raise ParamMismatch(f"k*{len(blocks)} = {k * len(blocks)} is not a multiple of m = {m}")
    if k > m:
        raise ParamMismatch(f"a block of height {k} does not fit in {m} rows")
    grid = [[None] * n for _ in range(m)]
    for t, b in enumerate(blocks):
        for a, c, x in b.filled():
            r, col = (a - 1 + k * t) % m, c - 1 + w * t
            if grid[r][col] is not None:
                raise Overlap(f"cell ({r + 1},{col + 1}) is already filled")
            grid[r][col] = x
    return PartiallyFilledArray.from_rows(grid)


def _require(report, what: str):
    if not report.passed:
        raise AssertionError(f"{what} failed verification:\n{report.summary()}")


def _check_bounds(m, n, s, k):
    try:
        DesignParams(m, n, s, k).check()
    except ParamMismatch as exc:
        raise BadParam(str(exc)) from None


# -- integer Heffter arrays with s = 0 mod 4 ----------------------------------

def heffter_sequence(n: int) -> BlockSequence:
    """The 3x4 block sequence used for ``n`` columns (``n = 0 mod 4``)."""
    if n == 4:
        return BlockSequence((BASE_H3443,), 12, name="base")
    if n % 8 == 0:
        return seq_blocks_A1((n - 8) // 8)
    if n % 8 == 4:
        return seq_blocks_A2((n - 12) // 8)
    raise BadParam(f"n must be a multiple of 4, got {n}")


def heffter_s0mod4(m: int, n: int, s: int, k: int) -> PartiallyFilledArray:
    """Integer H(m,n;s,k) for ``s = 0 mod 4`` and odd ``k != 5``."""
    _check_bounds(m, n, s, k)
    if s % 4:
        raise BadParam(f"s must be divisible by 4, got {s}")
    if k % 2 == 0 or k == 5:
        raise BadParam(f"k must be odd and different from 5, got {k}")
    U = heffter_sequence(n)
    if k == 3:
        Z = list(U.blocks)
    elif k % 4 == 3:
        q = (k - 7) // 4
        stack = build_filler_stack(q, "V")
        Z = [vstack(u, shift(stack, 3 * n + (16 * q + 16) * i)) for i, u in enumerate(U.blocks)]
    else:
        q = (k - 9) // 4
        stack = build_filler_stack(q, "W")
        Z = [vstack(u, shift(stack, 3 * n + (16 * q + 24) * i)) for i, u in enumerate(U.blocks)]
    A = assemble_columnwise(Z, m, n)
    _require(verify_integer_heffter(A, DesignParams(m, n, s, k)), f"H({m},{n};{s},{k})")
    return A


# -- signed magic arrays --------------------------------------------------------

def sma_s0mod4(m: int, n: int, s: int, k: int, supplier=None) -> PartiallyFilledArray:
    """SMA(m,n;s,k) for ``s = 0 mod 4``."""
    _check_bounds(m, n, s, k)
    if s % 4:
        raise BadParam(f"s must be divisible by 4, got {s}")
    if k % 2 == 0:
        return _sma_by_reduction(m, n, s, k, supplier)
    if n % 8 == 0:
        return sma_from_tight(m, n, s, k, supplier)
    U = seq_signed_skolem((n - 4) // 8)
    if k == 3:
        Z = list(U.blocks)
    else:
        q = (k - 5) // 2
        stack = build_filler_stack(q, "Vq2")
        Z = [vstack(u, shift(stack, 3 * n // 2 + (4 * q + 4) * i)) for i, u in enumerate(U.blocks)]
    A = assemble_columnwise(Z, m, n)
    _require(verify_sma(A, DesignParams(m, n, s, k)), f"SMA({m},{n};{s},{k})")
    return A


def _supplier(supplier):
    if supplier is None:
        from .solver.supplier import default_supplier
        supplier = default_supplier()
    return supplier


def lambda_fold_from_tight(m: int, n: int, s: int, k: int, lam: int, supplier=None,
                           tight: Optional[PartiallyFilledArray] = None) -> PartiallyFilledArray:
    """Integer lambda-fold relative Heffter array with ``t = 1`` from a tight H(k, n/lam; n/lam, k).

    ``tight`` overrides the supplier.
    """
    _check_bounds(m, n, s, k)
    if lam < 2 or lam % 2:
        raise BadParam(f"lambda must be even and positive, got {lam}")
    if n % lam or n < 3 * lam:
        raise BadParam(f"need lambda | n and n >= 3*lambda, got n={n}, lambda={lam}")
    if n % 2 or s % 2:
        raise BadParam("n and s must be even")
    w = n // lam
    if (w * k) % 4 not in (0, 3):
        raise BadParam(f"(n/lambda)k = {w * k} must be 0 or 3 mod 4")
    if tight is None:
        tight = _supplier(supplier).tight_heffter(k, w)
    if tight.shape != (k, w):
        raise ParamMismatch(f"tight ingredient must be {k}x{w}, got {tight.rows}x{tight.cols}")
    F = []
    for j in range(1, w + 1):
        col = tight.col(j)
        F.append(PartiallyFilledArray.from_rows([(x, -x) for x in col]))
    A = assemble_columnwise(F * (lam // 2), m, n)
    _require(verify_relative(A, DesignParams(m, n, s, k, t=1, lam=lam), integer=True),
             f"{lam}-fold H({m},{n};{s},{k})")
    return A


def sma_from_tight(m: int, n: int, s: int, k: int, supplier=None,
                   tight: Optional[PartiallyFilledArray] = None) -> PartiallyFilledArray:
    """SMA(m,n;s,k) for even ``n``, ``s`` with ``nk = 0, 6 mod 8`` via the 2-fold pairing."""
    _check_bounds(m, n, s, k)
    if n % 2 or s % 2:
        raise BadParam("n and s must be even")
    if (n * k) % 8 not in (0, 6):
        raise BadParam(f"nk = {n * k} must be 0 or 6 mod 8")
    A = lambda_fold_from_tight(m, n, s, k, 2, supplier, tight)
    _require(verify_sma(A, DesignParams(m, n, s, k)), f"SMA({m},{n};{s},{k})")
    return A


def mr_entry(e: int, nk: int) -> int:
    """``e > 0 -> nk/2 + e - 1`` and ``e < 0 -> nk/2 - |e|``; a bijection from ``+-[1, nk/2]`` to ``[0, nk-1]``."""
    h = nk // 2
    return h + e - 1 if e > 0 else h + e


def mr_from_shiftable_sma(A: PartiallyFilledArray, params) -> PartiallyFilledArray:
    """Map a shiftable SMA entrywise with :func:`mr_entry`.

    Each line has as many positive as negative entries, so every line sum
    moves by the same amount and the zero sums become constant.
    """
    p = params if isinstance(params, DesignParams) else DesignParams(*params)
    if p.nk % 2:
        raise BadParam(f"nk = {p.nk} is odd")
    if not verify_sma(A, p).passed:
        raise BadParam(f"input is not an SMA({p.m},{p.n};{p.s},{p.k})")
    if not is_shiftable(A):
        raise NotShiftable("input SMA is not shiftable")
    M = A.map_entries(lambda e: mr_entry(e, p.nk))
    _require(verify_mr(M, p), f"MR({p.m},{p.n};{p.s},{p.k})")
    return M


# -- shiftable SMAs by row pairing ---------------------------------------------
#
# Every magnitude of an SMA occurs once as +x and once as -x.  Putting both in
# the same row makes every row sum to 0 with as many positive as negative
# cells; each pair is then an arc between two columns, and a column balances
# when its outgoing and incoming arcs agree in number and in total.

def equal_sum_bundles(count: int, size: int) -> list:
    """Split ``1 .. count*size`` into ``count`` sets of ``size`` with equal sums."""
    if count == 1:
        return [list(range(1, size + 1))]
    if size < 2 or (size % 2 and count % 2 == 0):
        raise BadParam(f"1..{count * size} has no split into {count} equal-sum {size}-sets")
    N = count * size
    bundles = [[] for _ in range(count)]
    lo = 1
    if size % 2:
        # equal-sum triples on 1..3c (c odd): the first two entries sum to the
        # consecutive run 3t+3 .. 5t+3, so the third runs over 2c+1 .. 3c
        c, t = count, count // 2
        total = 3 * (3 * c + 1) // 2
        for i in range(c):
            x, y = i + 1, c + 1 + (i + t) % c
            bundles[i] += [x, y, total - x - y]
        lo = 3 * c + 1
    pairs = [(lo + j, N - j) for j in range((N - lo + 1) // 2)]
    for j, p in enumerate(pairs):
        bundles[j % count] += p
    return bundles


def _balanced_blocks(count: int, k: int) -> list:
    """``count`` disjoint ``k``-sets covering ``1 .. count*k``, each given as
    ``(forward, backward)`` halves of equal size and equal sum."""
    if k % 4 == 0:
        out = []
        for p in range(count):
            base = p * k
            fw, bw = [], []
            for q in range(k // 4):
                b = base + 4 * q
                fw += [b + 1, b + 4]
                bw += [b + 2, b + 3]
            out.append((fw, bw))
        return out
    if k % 4 == 2 and k >= 6 and count % 2 == 0:
        out = []
        for p in range(0, count, 2):
            base = p * k
            first = ([base + 1, base + 5, base + 6], [base + 2, base + 3, base + 7])
            second = ([base + 4, base + 11, base + 12], [base + 8, base + 9, base + 10])
            rest = list(range(base + 13, base + 2 * k + 1))
            for half, (fw, bw) in enumerate((first, second)):
                for q in range(half * (k - 6) // 4, (half + 1) * (k - 6) // 4):
                    b = rest[4 * q: 4 * q + 4]
                    fw += [b[0], b[3]]
                    bw += [b[1], b[2]]
            out += [first, second]
        return out
    raise BadParam(f"no balanced split of {count} blocks of size {k}")


def _row_pairing(m: int, n: int, s: int, k: int) -> PartiallyFilledArray:
    # staircase skeleton: row r holds the s cyclically consecutive columns from
    # r*s, paired left to right
    if n % 2:
        # arcs run between neighbouring columns c, c+1, k/2 of them per
        # neighbour pair; all point forward, so the bundles need equal sums
        queues = [[(x, True) for x in b] for b in equal_sum_bundles(n, k // 2)]
        key = lambda c: c
    else:
        # pairs never leave the column blocks {2p, 2p+1}; each block carries k
        # arcs split into two equal halves pointing either way
        queues = [[(x, True) for x in fw] + [(x, False) for x in bw] for fw, bw in _balanced_blocks(n // 2, k)]
        key = lambda c: c // 2
    cells = {}
    for r in range(m):
        c0 = r * s % n
        for j in range(s // 2):
            left, right = (c0 + 2 * j) % n, (c0 + 2 * j + 1) % n
            x, forward = queues[key(left)].pop()
            cells[r + 1, left + 1] = x if forward else -x
            cells[r + 1, right + 1] = -x if forward else x
    return PartiallyFilledArray.from_entries(m, n, cells)


def sma_row_pairing(m: int, n: int, s: int, k: int) -> PartiallyFilledArray:
    """Shiftable SMA(m,n;s,k) with both pair signs of each magnitude in one row.

    Covers even ``s``, ``k`` except when ``m``, ``n``, ``s``, ``k`` are all
    2 mod 4 (or a line of 2 cells leaves no room); raises BadParam there.
    """
    if s % 2 or k % 2:
        raise BadParam("row pairing needs even s and k")
    p = DesignParams(m, n, s, k)
    p.check(minimum=2)
    try:
        A = _row_pairing(m, n, s, k)
    except BadParam:
        A = transpose(_row_pairing(n, m, k, s))
    _require(verify_sma(A, p), f"row-paired SMA({m},{n};{s},{k})")
    if not is_shiftable(A):
        raise AssertionError("row pairing lost shiftability")
    return A


def _sma_by_reduction(m, n, s, k, supplier=None, shiftable=False) -> PartiallyFilledArray:
    from .reduction import reduce
    from .square import sma_diag
    d = gcd(s, k)
    if d < 3:
        raise BadParam(f"reduction needs gcd(s,k) >= 3, got {d}")
    A = reduce(sma_diag(n * k // d, d, shiftable, _supplier(supplier)), DesignParams(m, n, s, k))
    return A


def shiftable_sma(m: int, n: int, s: int, k: int, supplier=None) -> PartiallyFilledArray:
    """Shiftable SMA(m,n;s,k) for even ``gcd(s, k)``."""
    _check_bounds(m, n, s, k)
    d = gcd(s, k)
    if d % 2:
        raise BadParam(f"gcd(s,k) = {d} is odd")
    if d >= 4:
        A = _sma_by_reduction(m, n, s, k, supplier, shiftable=True)
    else:
        from .square import sma_shiftable_rect
        sup = _supplier(supplier)
        try:
            A = sma_shiftable_rect(m, n, s, k, sup)
        except IngredientUnavailable:
            # the stacked remainder is out of reach; ask for the whole array
            A = sup.shiftable_rect_sma(m, n, s, k)
    if not is_shiftable(A):
        raise AssertionError("shiftable SMA route lost shiftability")
    return A


# -- dispatcher ---------------------------------------------------------------

@dataclass(frozen=True)
class Construction:
    array: PartiallyFilledArray
    kind: str
    params: DesignParams
    provenance: Provenance

    @property
    def verify_kind(self) -> str:
        return "integer_heffter" if self.kind == "heffter" else self.kind

    def to_document(self) -> ArrayDocument:
        return ArrayDocument(self.array, self.verify_kind, self.params, self.provenance)


@dataclass(frozen=True)
class Route:
    """One way to build the requested array; ``transposed`` builds ``(n,m,k,s)`` and flips."""

    tag: str
    description: str
    build: Callable = field(compare=False, repr=False)
    transposed: bool = False
    shiftable: bool = False


def _heffter_routes(m, n, s, k, sup) -> list:
    routes = []
    d = gcd(s, k)
    if s % 4 == 0 and k % 2 and k != 5:
        routes.append(Route("direct/s0mod4", "3x4 block sequence over filler stacks",
                            lambda: heffter_s0mod4(m, n, s, k)))
    if k % 4 == 0 and s % 2 and s != 5:
        routes.append(Route("direct/s0mod4", "3x4 block sequence over filler stacks, transposed",
                            lambda: transpose(heffter_s0mod4(n, m, k, s)), transposed=True))
    nk = n * k
    a = nk // d if d else 0
    diag = (d % 4 == 0 or (d % 4 == 1 and d > 1 and nk % 4 == 3) or (d % 4 == 3 and nk % 4 in (0, 3)))
    if diag:
        from .reduction import reduce
        shift_ok = d % 4 == 0

        def build():
            return reduce(sup.diagonal_heffter(a, d, shiftable=shift_ok), DesignParams(m, n, s, k))

        what = "shiftable " if shift_ok else ""
        routes.append(Route(f"reduce/diagonal-H{d % 4}", f"reduction of a {what}diagonal integer H({a};{d})",
                            build, shiftable=shift_ok))
    return routes


def _heffter_gap(m, n, s, k) -> str:
    nk = n * k
    d = gcd(s, k)
    if nk % 4 in (1, 2):
        return f"no integer H({m},{n};{s},{k}) exists: nk = {nk} is {nk % 4} mod 4"
    if d == 1:
        return "open case: gcd(s,k) = 1 outside the s = 0 mod 4 family"
    if d % 4 == 2:
        return f"gcd(s,k) = {d} is 2 mod 4: relies on an external existence result that is not implemented"
    if d % 4 == 1:
        return f"open case: gcd(s,k) = {d} is 1 mod 4 and nk = {nk} is 0 mod 4"
    return "not covered"


def _sma_routes(m, n, s, k, sup) -> list:
    routes = []
    d = gcd(s, k)
    nk = n * k
    if s % 4 == 0 and k % 2 and n % 8 == 4:
        routes.append(Route("direct/signed-skolem", "signed Skolem blocks over filler stacks",
                            lambda: sma_s0mod4(m, n, s, k, sup)))
    if k % 4 == 0 and s % 2 and m % 8 == 4:
        routes.append(Route("direct/signed-skolem", "signed Skolem blocks over filler stacks, transposed",
                            lambda: transpose(sma_s0mod4(n, m, k, s, sup)), transposed=True))
    if d >= 3:
        routes.append(Route("reduce/diagonal-SMA", f"reduction of a diagonal SMA({nk // d};{d})",
                            lambda: _sma_by_reduction(m, n, s, k, sup)))
    if d == 2:
        routes.append(Route("stack/shiftable", "shiftable diagonal SMA stacked over a shiftable rectangle",
                            lambda: shiftable_sma(m, n, s, k, sup), shiftable=True))
    if n % 2 == 0 and s % 2 == 0 and nk % 8 in (0, 6) and n >= 6:
        routes.append(Route("lambda-fold/tight", f"2-fold pairing of a tight integer H({k},{n // 2};{n // 2},{k})",
                            lambda: sma_from_tight(m, n, s, k, sup)))
    if m % 2 == 0 and k % 2 == 0 and nk % 8 in (0, 6) and m >= 6:
        routes.append(Route("lambda-fold/tight", f"2-fold pairing of a tight integer H({s},{m // 2};{m // 2},{s}), "
                                                 "transposed",
                            lambda: transpose(sma_from_tight(n, m, k, s, sup)), transposed=True))
    return routes


def _sma_gap(m, n, s, k) -> str:
    if gcd(s, k) == 1:
        return "open case: gcd(s,k) = 1 outside the s = 0 mod 4 and nk = 0, 6 mod 8 families"
    return "not covered"


def _mr_routes(m, n, s, k, sup) -> list:
    routes = []
    d = gcd(s, k)
    nk = n * k
    p = DesignParams(m, n, s, k)
    if d % 2 == 0:
        routes.append(Route("sma-to-mr/shiftable", "entry map applied to a shiftable SMA",
                            lambda: mr_from_shiftable_sma(shiftable_sma(m, n, s, k, sup), p)))
    if d >= 3 and nk % 2:
        from .reduction import reduce
        a = nk // d
        routes.append(Route("reduce/diagonal-MR", f"reduction of a diagonal MR({a};{d})",
                            lambda: reduce(sup.diagonal_mr(a, d), p)))
    return routes


def _mr_gap(m, n, s, k) -> str:
    d = gcd(s, k)
    if d == 1:
        return "open case: gcd(s,k) = 1"
    return f"open case: gcd(s,k) = {d} is odd and nk = {n * k} is even"


_ROUTES = {"heffter": (_heffter_routes, _heffter_gap), "sma": (_sma_routes, _sma_gap), "mr": (_mr_routes, _mr_gap)}


def routes(kind: str, m: int, n: int, s: int, k: int, supplier=None) -> list:
    """Candidate routes in priority order; empty when nothing covers the parameters."""
    if kind not in _ROUTES:
        raise BadParam(f"unknown kind {kind!r}; expected one of {KINDS}")
    _check_bounds(m, n, s, k)
    return _ROUTES[kind][0](m, n, s, k, _supplier(supplier) if supplier is not False else None)


def coverage(kind: str, m: int, n: int, s: int, k: int) -> Optional[Route]:
    """The first route that applies, or None.  Does not build anything."""
    rs = routes(kind, m, n, s, k, supplier=False)
    return rs[0] if rs else None


def is_covered(kind: str, m: int, n: int, s: int, k: int) -> bool:
    return coverage(kind, m, n, s, k) is not None


def construct(kind: str, m: int, n: int, s: int, k: int, supplier=None) -> Construction:
    """Build a verified array of ``kind`` with parameters ``(m, n, s, k)``.

    Routes are tried in priority order; a route whose ingredient is missing
    falls through to the next one.  Raises :class:`NotCovered` when no route
    applies and :class:`IngredientUnavailable` when every route lacked an
    ingredient.
    """
    rs = routes(kind, m, n, s, k, supplier)
    if not rs:
        raise NotCovered(f"{kind}({m},{n};{s},{k}): {_ROUTES[kind][1](m, n, s, k)}")
    p = DesignParams(m, n, s, k)
    vkind = "integer_heffter" if kind == "heffter" else kind
    missing = []
    for route in rs:
        try:
            A = route.build()
        except IngredientUnavailable as exc:
            missing.append(exc)
            continue
        _require(verify_kind(vkind, A, p), f"{kind}({m},{n};{s},{k}) via {route.tag}")
        if route.shiftable and not is_shiftable(A):
            raise AssertionError(f"{route.tag} promised a shiftable array")
        return Construction(A, kind, p, Provenance(route.tag, route.description))
    first = missing[0]
    attempted = [f"{r.tag}: {e}" for r, e in zip(rs, missing)]
    raise IngredientUnavailable(f"{kind}({m},{n};{s},{k}): {first}", first.reason, attempted)
