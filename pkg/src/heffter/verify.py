"""Checkers for Heffter arrays, relative Heffter arrays, SMAs and MRs.

Every checker returns a :class:`VerificationReport` listing all violations
found, not just the first one.  Shape or parameter errors that make the
question meaningless raise :class:`~heffter.errors.ParamMismatch` instead.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .core import DesignParams, PartiallyFilledArray, diagonal_indices, is_shiftable
from .errors import BadRelativeParams, ParamMismatch

ROW_FILL = "RowFill"
COL_FILL = "ColFill"
ROW_SUM = "RowSum"
COL_SUM = "ColSum"
DOMAIN = "Domain"
MULTIPLICITY = "SupportMultiplicity"
DIAGONAL = "DiagonalProfile"
SHIFTABILITY = "Shiftability"


@dataclass(frozen=True)
class Violation:
    kind: str
    location: object
    detail: str


@dataclass
class VerificationReport:
    violations: list = field(default_factory=list)
    observed_constants: Optional[tuple] = None
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def add(self, kind, location, detail):
        self.violations.append(Violation(kind, location, detail))

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def summary(self) -> str:
        if self.passed:
            return "passed"
        head = f"{len(self.violations)} violation(s)"
        lines = [f"  {v.kind} at {v.location}: {v.detail}" for v in self.violations[:20]]
        if len(self.violations) > 20:
            lines.append("  ...")
        return "\n".join([head] + lines)


def _params(params) -> DesignParams:
    if isinstance(params, DesignParams):
        return params
    return DesignParams(*params)


def _check_shape(A, p: DesignParams):
    if p.m * p.s != p.n * p.k:
        raise ParamMismatch(f"ms != nk for ({p.m},{p.n},{p.s},{p.k})")
    if A.shape != (p.m, p.n):
        raise ParamMismatch(f"array is {A.rows}x{A.cols}, params ask for {p.m}x{p.n}")


def _check_fill(A, p, report):
    for i, c in enumerate(A.row_counts(), 1):
        if c != p.s:
            report.add(ROW_FILL, ("row", i), f"{c} filled, expected {p.s}")
    for j, c in enumerate(A.col_counts(), 1):
        if c != p.k:
            report.add(COL_FILL, ("col", j), f"{c} filled, expected {p.k}")


def _check_sums(A, report, modulus=0, row_target=0, col_target=0):
    for i, total in enumerate(A.row_sums(), 1):
        bad = (total - row_target) % modulus if modulus else total != row_target
        if bad:
            report.add(ROW_SUM, ("row", i), f"sum {total}" + (f" (mod {modulus})" if modulus else ""))
    for j, total in enumerate(A.col_sums(), 1):
        bad = (total - col_target) % modulus if modulus else total != col_target
        if bad:
            report.add(COL_SUM, ("col", j), f"sum {total}" + (f" (mod {modulus})" if modulus else ""))


def _check_exact_multiset(entries, expected: Counter, report, label):
    seen = Counter(entries)
    for x, c in sorted(seen.items()):
        want = expected.get(x, 0)
        if want == 0:
            report.add(DOMAIN, ("value", x), f"{x} is outside the {label} domain")
        elif c != want:
            report.add(MULTIPLICITY, ("value", x), f"{x} appears {c} times, expected {want}")
    for x, want in sorted(expected.items()):
        if x not in seen:
            report.add(MULTIPLICITY, ("value", x), f"{x} is missing")


def verify_heffter_modular(A: PartiallyFilledArray, params) -> VerificationReport:
    """Heffter array over the cyclic group of order ``2nk + 1``."""
    p = _params(params)
    _check_shape(A, p)
    report = VerificationReport()
    _check_fill(A, p, report)
    v = 2 * p.nk + 1
    pairs = Counter()
    for i, j, x in A.filled():
        r = x % v
        if r == 0:
            report.add(DOMAIN, (i, j), f"{x} is 0 mod {v}")
            continue
        pairs[min(r, v - r)] += 1
    for x in range(1, p.nk + 1):
        c = pairs.get(x, 0)
        if c != 1:
            report.add(MULTIPLICITY, ("value", x), f"+-{x} appears {c} times mod {v}, expected once")
    _check_sums(A, report, modulus=v)
    return report


def verify_integer_heffter(A: PartiallyFilledArray, params) -> VerificationReport:
    p = _params(params)
    _check_shape(A, p)
    report = VerificationReport()
    if p.nk % 4 not in (0, 3):
        report.warnings.append(f"nk={p.nk} is not 0 or 3 mod 4: no integer H(m,n;s,k) can exist")
    _check_fill(A, p, report)
    abs_counts = Counter()
    for i, j, x in A.filled():
        if x == 0 or abs(x) > p.nk:
            report.add(DOMAIN, (i, j), f"{x} is outside +-[1,{p.nk}]")
        else:
            abs_counts[abs(x)] += 1
    for x, c in sorted(abs_counts.items()):
        if c > 1:
            report.add(MULTIPLICITY, ("value", x), f"|{x}| appears {c} times")
    _check_sums(A, report)
    return report


def relative_domain(p: DesignParams) -> tuple:
    """Return ``(v, ell, phi)`` for a relative array; ``phi`` is the sorted integer domain."""
    t, lam = p.t or 1, p.lam or 1
    if (2 * p.nk) % lam:
        raise BadRelativeParams(f"lambda={lam} does not divide 2nk={2 * p.nk}")
    if (2 * p.nk // lam) % t:
        raise BadRelativeParams(f"t={t} does not divide 2nk/lambda")
    v = 2 * p.nk // lam + t
    ell = v // t
    excluded = {ell * i for i in range(1, t // 2 + 1)}
    phi = [x for x in range(1, v // 2 + 1) if x not in excluded]
    return v, ell, phi


def verify_relative(A: PartiallyFilledArray, params, integer: bool = False) -> VerificationReport:
    """lambda-fold Heffter array relative to the order-``t`` subgroup."""
    p = _params(params)
    _check_shape(A, p)
    v, ell, phi = relative_domain(p)
    lam = p.lam or 1
    t = p.t or 1
    report = VerificationReport()
    _check_fill(A, p, report)
    if integer:
        phi_set = set(phi)
        counts = Counter()
        for i, j, x in A.filled():
            if abs(x) not in phi_set:
                report.add(DOMAIN, (i, j), f"{x} is outside +-Phi")
            else:
                counts[abs(x)] += 1
        for x in phi:
            want = lam // 2 if (v % 2 == 0 and t % 2 == 1 and 2 * x == v) else lam
            if counts.get(x, 0) != want:
                report.add(MULTIPLICITY, ("value", x), f"|{x}| appears {counts.get(x, 0)} times, expected {want}")
        _check_sums(A, report)
    else:
        counts = Counter()
        for i, j, x in A.filled():
            r = x % v
            if r % ell == 0:
                report.add(DOMAIN, (i, j), f"{x} lies in the subgroup of order {t} mod {v}")
                continue
            counts[r] += 1
            counts[(-r) % v] += 1
        for x in range(1, v):
            if x % ell and counts.get(x, 0) != lam:
                report.add(MULTIPLICITY, ("value", x), f"{x} appears {counts.get(x, 0)} times in E u -E, expected {lam}")
        _check_sums(A, report, modulus=v)
    return report


def sma_domain(nk: int) -> list:
    if nk % 2:
        h = (nk - 1) // 2
        return list(range(-h, h + 1))
    h = nk // 2
    return [x for x in range(-h, h + 1) if x]


def verify_sma(A: PartiallyFilledArray, params) -> VerificationReport:
    p = _params(params)
    _check_shape(A, p)
    report = VerificationReport()
    _check_fill(A, p, report)
    _check_exact_multiset([x for _, _, x in A.filled()], Counter(sma_domain(p.nk)), report, "SMA")
    _check_sums(A, report)
    return report


def verify_mr(A: PartiallyFilledArray, params) -> VerificationReport:
    p = _params(params)
    _check_shape(A, p)
    report = VerificationReport()
    _check_fill(A, p, report)
    _check_exact_multiset([x for _, _, x in A.filled()], Counter(range(p.nk)), report, "MR")
    rows, cols = A.row_sums(), A.col_sums()
    c1 = rows[0] if len(set(rows)) == 1 else None
    c2 = cols[0] if len(set(cols)) == 1 else None
    if c1 is None:
        for i, x in enumerate(rows, 1):
            if x != rows[0]:
                report.add(ROW_SUM, ("row", i), f"sum {x} differs from row 1 sum {rows[0]}")
    if c2 is None:
        for j, x in enumerate(cols, 1):
            if x != cols[0]:
                report.add(COL_SUM, ("col", j), f"sum {x} differs from column 1 sum {cols[0]}")
    report.observed_constants = (c1, c2)
    if report.passed:
        # forced by the total nk(nk-1)/2 spread over m rows and n columns
        if 2 * c1 != p.s * (p.nk - 1):
            report.add(ROW_SUM, "all", f"c1={c1} != s(nk-1)/2")
        if 2 * c2 != p.k * (p.nk - 1):
            report.add(COL_SUM, "all", f"c2={c2} != k(nk-1)/2")
    return report


def verify_diagonal(A: PartiallyFilledArray, b: int) -> VerificationReport:
    prof = diagonal_indices(A)
    report = VerificationReport()
    if not prof.is_cyclically(b):
        detail = f"filled diagonals {sorted(prof.indices)}"
        if not prof.full:
            detail += " (some only partly filled)"
        if not prof.consecutive:
            detail += " (not cyclically consecutive)"
        report.add(DIAGONAL, "diagonals", detail + f"; expected {b} consecutive full diagonals")
    return report


def verify_shiftable(A: PartiallyFilledArray) -> VerificationReport:
    report = VerificationReport()
    if not is_shiftable(A):
        report.add(SHIFTABILITY, "array", "rows/columns do not balance positive and negative entries")
    return report


def verify_kind(kind: str, A: PartiallyFilledArray, params) -> VerificationReport:
    """Dispatch on a kind tag as used by the CLI and ingredient files."""
    if kind in ("heffter", "modular_heffter"):
        return verify_heffter_modular(A, params)
    if kind == "integer_heffter":
        return verify_integer_heffter(A, params)
    if kind == "relative":
        return verify_relative(A, params, integer=False)
    if kind == "integer_relative":
        return verify_relative(A, params, integer=True)
    if kind == "sma":
        return verify_sma(A, params)
    if kind == "mr":
        return verify_mr(A, params)
    raise ValueError(f"unknown kind {kind!r}")


KINDS = ("heffter", "integer_heffter", "relative", "integer_relative", "sma", "mr")
