"""Search constraints and their compilation into flat kernel tables."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from ..core import DesignParams, PartiallyFilledArray
from ..errors import BadConstraints
from ..verify import relative_domain, sma_domain

FOUND = "Found"
UNSAT = "ExhaustedUnsat"
BUDGET = "BudgetExceeded"

STATUS_NAMES = {0: FOUND, 1: UNSAT, 2: BUDGET}

SKELETONS = ("auto", "full", "diagonal", "staircase")
VALUE_ORDERS = ("descending", "ascending")
SEARCH_KINDS = ("heffter", "integer_heffter", "relative", "integer_relative", "sma", "mr")


@dataclass(frozen=True)
class SearchConstraints:
    """What to search for.

    ``kind`` is one of the verifier kinds.  ``skeleton`` picks the filled
    positions: ``diagonal`` fills ``D_0 .. D_{s-1}`` of a square, ``full``
    every cell (needs ``s == n`` and ``k == m``), ``staircase`` gives row ``i``
    the ``s`` cyclically consecutive columns starting at ``(i-1)*s``.  ``auto``
    chooses ``full`` when the array is tight and ``staircase`` otherwise.

    ``row_blocks`` splits the rows into consecutive blocks (sizes summing to
    ``m``).  The value domain is then dealt out evenly across magnitudes so
    each block owns a spread-out slice, and rows may only use their block's
    slice.  A dead end then stays local to one block boundary instead of
    surfacing only after the early rows have exhausted the values that late
    rows need.
    """

    kind: str
    m: int
    n: int
    s: int
    k: int
    skeleton: str = "auto"
    shiftable: bool = False
    t: Optional[int] = None
    lam: Optional[int] = None
    symmetry_breaking: bool = True
    node_budget: int = 10_000_000
    time_budget: float = 60.0
    seed: Optional[int] = None
    diagonal_signs: Optional[tuple] = None
    prefilled: tuple = ()
    value_order: str = "descending"
    row_blocks: Optional[tuple] = None

    @classmethod
    def diagonal(cls, kind: str, a: int, b: int, **kw) -> "SearchConstraints":
        return cls(kind, a, a, b, b, skeleton="diagonal", **kw)

    @property
    def params(self) -> DesignParams:
        return DesignParams(self.m, self.n, self.s, self.k, self.t, self.lam)

    @property
    def resolved_skeleton(self) -> str:
        if self.skeleton != "auto":
            return self.skeleton
        return "full" if (self.s == self.n and self.k == self.m) else "staircase"


@dataclass
class SearchOutcome:
    verdict: str
    array: Optional[PartiallyFilledArray] = None
    nodes: int = 0
    depth: int = 0
    elapsed: float = 0.0
    backend: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.verdict == FOUND


def skeleton_cells(c: SearchConstraints) -> list:
    """Filled positions (0-based) in the order the search assigns them."""
    m, n, s, k = c.m, c.n, c.s, c.k
    kind = c.resolved_skeleton
    if kind == "full":
        if s != n or k != m:
            raise BadConstraints("a full skeleton needs s == n and k == m")
        return [(i, j) for i in range(m) for j in range(n)]
    if kind == "diagonal":
        if m != n or s != k:
            raise BadConstraints("a diagonal skeleton needs a square with s == k")
        # row by row, each row starting on D_0 so the cell closing its column comes first
        return [(i, (i + r) % n) for i in range(m) for r in range(s)]
    if kind == "staircase":
        cells = [(i, (i * s + r) % n) for i in range(m) for r in range(s)]
        if len(set(cells)) != len(cells):
            raise BadConstraints("staircase skeleton overlaps itself")
        return cells
    raise BadConstraints(f"unknown skeleton {c.skeleton!r}")


def _groups(c: SearchConstraints):
    """Return ``(modulus, groups)`` where each group is ``(count, [values])``."""
    p = c.params
    nk = p.nk
    if c.kind == "integer_heffter":
        return 0, [(1, [x, -x]) for x in range(1, nk + 1)]
    if c.kind == "heffter":
        v = 2 * nk + 1
        return v, [(1, [x, v - x]) for x in range(1, nk + 1)]
    if c.kind == "sma":
        return 0, [(1, [x]) for x in sorted(sma_domain(nk), key=lambda x: (abs(x), x < 0))]
    if c.kind == "mr":
        return 0, [(1, [x]) for x in range(nk)]
    if c.kind in ("relative", "integer_relative"):
        if c.t is None or c.lam is None:
            raise BadConstraints("relative searches need t and lam")
        v, ell, phi = relative_domain(p)
        lam, t = c.lam, c.t
        groups = []
        if c.kind == "integer_relative":
            for x in phi:
                cnt = lam // 2 if (v % 2 == 0 and t % 2 == 1 and 2 * x == v) else lam
                if cnt:
                    groups.append((cnt, [x, -x]))
            return 0, groups
        for x in range(1, v // 2 + 1):
            if x % ell == 0:
                continue
            if 2 * x == v:
                if lam % 2:
                    raise BadConstraints("v/2 cannot reach an odd multiplicity")
                groups.append((lam // 2, [x]))
            else:
                groups.append((lam, [x, v - x]))
        return v, groups
    raise BadConstraints(f"unknown kind {c.kind!r}")


@dataclass
class CompiledProblem:
    nrows: int
    ncols: int
    cell_row: list
    cell_col: list
    row_len: list
    col_len: list
    row_target: list
    col_target: list
    modulus: int
    opt_value: list
    opt_group: list
    group_count: list
    branch_order: list
    bound_order: list
    lookup_base: int
    lookup: list
    balance: int
    sym_group: int
    sym_cell: list
    sym_last: int
    cell_sign: list
    cell_fix: list

    cell_class: list = field(default_factory=list)
    group_class: list = field(default_factory=list)
    row_bound_class: list = field(default_factory=list)
    col_bound_class: list = field(default_factory=list)

    def as_tuple(self):
        return (self.nrows, self.ncols, self.cell_row, self.cell_col, self.row_len, self.col_len,
                self.row_target, self.col_target, self.modulus, self.opt_value, self.opt_group,
                self.group_count, self.branch_order, self.bound_order, self.lookup_base, self.lookup,
                self.balance, self.sym_group, self.sym_cell, self.sym_last, self.cell_sign, self.cell_fix,
                self.cell_class, self.group_class, self.row_bound_class, self.col_bound_class)


def compile_problem(c: SearchConstraints) -> CompiledProblem:
    if c.kind not in SEARCH_KINDS:
        raise BadConstraints(f"unknown kind {c.kind!r}")
    p = c.params
    if min(c.m, c.n, c.s, c.k) < 1 or c.m * c.s != c.n * c.k or c.s > c.n or c.k > c.m:
        raise BadConstraints(f"inconsistent shape ({c.m},{c.n},{c.s},{c.k})")
    cells = skeleton_cells(c)
    if c.prefilled:
        # fixed cells go first so no earlier cell can take their values
        fixed = {(i % c.m, j % c.n) for (i, j), _ in c.prefilled}
        cells = [ij for ij in cells if ij in fixed] + [ij for ij in cells if ij not in fixed]
    modulus, groups = _groups(c)
    if sum(cnt for cnt, _ in groups) != len(cells):
        raise BadConstraints(f"{len(cells)} cells but the domain supplies {sum(cnt for cnt, _ in groups)} entries")
    if c.shiftable and (c.s % 2 or c.k % 2 or modulus):
        raise BadConstraints("shiftable searches need even s, k and integer entries")

    opt_value, opt_group = [], []
    for g, (_, values) in enumerate(groups):
        for x in values:
            if c.shiftable and x == 0:
                continue
            opt_value.append(x)
            opt_group.append(g)
    group_count = [cnt for cnt, _ in groups]

    if c.kind == "mr":
        row_t, col_t = c.s * (p.nk - 1), c.k * (p.nk - 1)
        if row_t % 2 or col_t % 2:
            raise BadConstraints("magic constants are not integers")
        row_target, col_target = [row_t // 2] * c.m, [col_t // 2] * c.n
    else:
        row_target, col_target = [0] * c.m, [0] * c.n

    # symmetry breaking: the largest-magnitude group goes to a canonical cell,
    # and for sign-symmetric domains it takes its positive value
    sym_group, sym_cell, sym_last = -1, [0] * len(cells), -1
    skel = c.resolved_skeleton
    if (c.symmetry_breaking and skel in ("full", "diagonal") and not c.prefilled and c.diagonal_signs is None
            and c.row_blocks is None):
        top = max(range(len(opt_value)), key=lambda o: (_magnitude(opt_value[o], modulus), opt_value[o]))
        sym_group = opt_group[top]
        if group_count[sym_group] != 1:
            sym_group = -1
    if sym_group >= 0:
        canon = {(0, 0)} if skel == "full" else {(0, j) for j in range(c.n)}
        for idx, cell in enumerate(cells):
            if cell in canon:
                sym_cell[idx] = 1
                sym_last = idx
        sign_symmetric = c.kind in ("heffter", "integer_heffter", "relative", "integer_relative")
        if sign_symmetric and len(groups[sym_group][1]) == 2:
            keep = max((o for o in range(len(opt_value)) if opt_group[o] == sym_group),
                       key=lambda o: _signed(opt_value[o], modulus))
            drop = [o for o in range(len(opt_value)) if opt_group[o] == sym_group and o != keep]
            for o in sorted(drop, reverse=True):
                del opt_value[o]
                del opt_group[o]

    def canonical(o):
        x = _signed(opt_value[o], modulus)
        return (abs(x), x < 0, o)

    if c.value_order not in VALUE_ORDERS:
        raise BadConstraints(f"unknown value order {c.value_order!r}")
    branch_order = sorted(range(len(opt_value)), key=canonical)
    if c.value_order == "descending":
        # largest magnitude first, positive before negative within a magnitude
        branch_order = sorted(range(len(opt_value)), key=lambda o: (-abs(_signed(opt_value[o], modulus)),
                                                                    _signed(opt_value[o], modulus) < 0, o))
    if c.seed:
        random.Random(c.seed).shuffle(branch_order)
    bound_order = sorted(range(len(opt_value)), key=lambda o: (opt_value[o], o))

    if modulus:
        lookup_base, size = 0, modulus
    else:
        lo = min(opt_value, default=0)
        hi = max(opt_value, default=0)
        lookup_base, size = lo, hi - lo + 1
    lookup = [-1] * size
    for o, x in enumerate(opt_value):
        lookup[x - lookup_base] = o

    cell_sign = [0] * len(cells)
    if c.diagonal_signs is not None:
        if skel != "diagonal" or len(c.diagonal_signs) != c.s:
            raise BadConstraints("diagonal_signs needs a diagonal skeleton and one sign per diagonal")
        for idx, (i, j) in enumerate(cells):
            cell_sign[idx] = 1 if c.diagonal_signs[(j - i) % c.n] > 0 else -1

    cell_fix = [-1] * len(cells)
    if c.prefilled:
        where = {cell: idx for idx, cell in enumerate(cells)}
        for (i, j), x in c.prefilled:
            idx = where.get((i % c.m, j % c.n))
            key = x % modulus if modulus else x
            if idx is None or not (0 <= key - lookup_base < len(lookup)) or lookup[key - lookup_base] < 0:
                raise BadConstraints(f"prefilled value {x} at ({i},{j}) is outside the skeleton or domain")
            cell_fix[idx] = lookup[key - lookup_base]

    row_len, col_len = [0] * c.m, [0] * c.n
    for i, j in cells:
        row_len[i] += 1
        col_len[j] += 1
    cell_class, group_class, row_bc, col_bc = _classes(c, cells, groups, modulus)
    return CompiledProblem(
        c.m, c.n, [i for i, _ in cells], [j for _, j in cells], row_len, col_len, row_target, col_target,
        modulus, opt_value, opt_group, group_count, branch_order, bound_order, lookup_base, lookup,
        1 if c.shiftable else 0, sym_group, sym_cell, sym_last, cell_sign, cell_fix,
        cell_class, group_class, row_bc, col_bc,
    )


def _classes(c: SearchConstraints, cells, groups, modulus):
    """Per-cell and per-group block ids for ``row_blocks`` (all -1 when unused)."""
    n_cells = len(cells)
    if c.row_blocks is None:
        return [-1] * n_cells, [-1] * len(groups), [-1] * n_cells, [-1] * n_cells
    sizes = [int(x) for x in c.row_blocks]
    if sum(sizes) != c.m or min(sizes) < 1:
        raise BadConstraints("row_blocks must be positive sizes summing to m")
    if any(cnt != 1 for cnt, _ in groups):
        raise BadConstraints("row_blocks needs a domain where every value is used once")
    row_block = []
    for t, size in enumerate(sizes):
        row_block += [t] * size
    cell_class = [row_block[i] for i, _ in cells]
    need = [0] * len(sizes)
    for t in cell_class:
        need[t] += 1
    # deal the magnitudes out so every block's slice tracks its share of the range
    order = sorted(range(len(groups)), key=lambda g: min(_magnitude(x, modulus) for x in groups[g][1]))
    group_class = [-1] * len(groups)
    got = [0] * len(sizes)
    for pos, g in enumerate(order, 1):
        t = max((t for t in range(len(sizes)) if got[t] < need[t]),
                key=lambda t: (need[t] * pos / n_cells - got[t], -t))
        group_class[g] = t
        got[t] += 1
    # shuffle within windows so no block inherits a residue pattern (all odd, say)
    rng = random.Random(c.seed or 0)
    w = len(sizes)
    for lo in range(0, len(order), w):
        win = order[lo:lo + w]
        labels = [group_class[g] for g in win]
        rng.shuffle(labels)
        for g, t in zip(win, labels):
            group_class[g] = t

    def suffix_class(line_of):
        out = [-1] * n_cells
        seen = {}
        for p in range(n_cells - 1, -1, -1):
            line = line_of(cells[p])
            # classes of the cells after p in this line
            cls = seen.get(line)
            out[p] = -1 if cls is None or cls == -2 else cls
            here = cell_class[p]
            seen[line] = here if cls is None or cls == here else -2
        return out

    return cell_class, group_class, suffix_class(lambda ij: ij[0]), suffix_class(lambda ij: ij[1])


def _signed(x, modulus):
    if modulus and x > modulus // 2:
        return x - modulus
    return x


def _magnitude(x, modulus):
    return abs(_signed(x, modulus))


def decode(c: SearchConstraints, prob: CompiledProblem, values: list) -> PartiallyFilledArray:
    grid = [[None] * c.n for _ in range(c.m)]
    for i, j, x in zip(prob.cell_row, prob.cell_col, values):
        grid[i][j] = _signed(x, prob.modulus)
    return PartiallyFilledArray.from_rows(grid)
