"""Regenerate the bundled ingredient fixtures.

Two arrays are recovered from printed figures: the diagonal H(24;3) that
reduces to the printed H(8,12;9,6), and the tight H(15,4;4,15) whose columns
make up the strips of the printed SMA(20,8;6,15).  The rest are small
diagonal squares found by the search kernel.

    python3 scripts/gen_ingredients.py [--budget-secs 60] [--only NAME ...]
"""

from __future__ import annotations

import argparse
import sys
import time
from importlib import resources
from pathlib import Path

from heffter.core import DesignParams, PartiallyFilledArray
from heffter.io import ArrayDocument, Provenance, read_array, write_array
from heffter.reduction import reduce
from heffter.solver import SearchConstraints, solve_with_restarts
from heffter.verify import verify_diagonal, verify_kind

OUT = Path(__file__).resolve().parent.parent / "src" / "heffter" / "fixtures" / "ingredients"

# (kind, side, diagonals) for the search stage; odd-width bases the
# package has no closed formula for
SEARCH_TARGETS = (
    [("integer_heffter", a, 3) for a in (4, 5, 8, 9, 13, 16, 17)]
    + [("integer_heffter", a, 5) for a in (7, 11, 15, 19, 23)]
    + [("sma", a, 3) for a in (4, 8, 12, 16)]
    + [("sma", a, 5) for a in (6, 8, 10, 12)]
)


def fixture(name: str) -> ArrayDocument:
    return read_array(str(resources.files("heffter").joinpath("fixtures", name)))


def unreduce(R: PartiallyFilledArray, side: int, d: int) -> PartiallyFilledArray:
    """Invert the reduction: lift each cell of ``R`` to the unique cell on ``D_0 .. D_{d-1}``."""
    m, n = R.shape
    cells = {}
    for u, v, x in R.filled():
        hits = [(i, (i + r - 1) % side + 1) for i in range(1, side + 1) for r in range(d)
                if (i - u) % m == 0 and ((i + r - 1) % side + 1 - v) % n == 0]
        if len(hits) != 1:
            raise ValueError(f"cell ({u},{v}) lifts to {len(hits)} cells")
        cells[hits[0]] = x
    return PartiallyFilledArray.from_entries(side, side, cells)


def h24_3() -> ArrayDocument:
    R = fixture("h_8_12_9_6.grid").array
    A = unreduce(R, 24, 3)
    assert reduce(A, (8, 12, 9, 6)) == R
    return ArrayDocument(A, "integer_heffter", DesignParams.square(24, 3),
                         Provenance("figure", "lifted from the printed H(8,12;9,6) by inverting the reduction"))


def tight_15_4() -> ArrayDocument:
    S = fixture("sma_20_8_6_15.grid").array
    cols = [[S.get(i + 1 + 15 * t, 2 * t + 1) for i in range(15)] for t in range(4)]
    A = PartiallyFilledArray.from_rows(list(zip(*cols)))
    return ArrayDocument(A, "integer_heffter", DesignParams(15, 4, 4, 15),
                         Provenance("figure", "odd columns of the strips of the printed SMA(20,8;6,15)"))


def searched(kind: str, a: int, b: int, secs: float) -> ArrayDocument | None:
    c = SearchConstraints.diagonal(kind, a, b, node_budget=10**12, time_budget=secs, seed=0,
                                   symmetry_breaking=False)
    out = solve_with_restarts(c, attempts=4)
    if not out.found:
        return None
    detail = f"search seed {c.seed}: {out.nodes} nodes"
    return ArrayDocument(out.array, kind, DesignParams.square(a, b), Provenance("solver", detail))


def save(doc: ArrayDocument, name: str) -> None:
    report = verify_kind(doc.kind, doc.array, doc.params)
    p = doc.params
    if p.m == p.n and p.s == p.k and p.s < p.n:
        report.violations += verify_diagonal(doc.array, p.s).violations
    if not report.passed:
        raise AssertionError(f"{name} failed verification:\n{report.summary()}")
    write_array(doc, OUT / f"{name}.json")
    print(f"wrote {name}", flush=True)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget-secs", type=float, default=60.0, help="search time per target")
    ap.add_argument("--only", nargs="*", help="restrict to these fixture names")
    ap.add_argument("--skip-existing", action="store_true")
    args = ap.parse_args(argv)
    OUT.mkdir(parents=True, exist_ok=True)
    jobs = {"integer_heffter_diag_24_3": h24_3, "integer_heffter_15_4_4_15": tight_15_4}
    for kind, a, b in SEARCH_TARGETS:
        jobs[f"{kind}_diag_{a}_{b}"] = (lambda kind=kind, a=a, b=b: searched(kind, a, b, args.budget_secs))
    missed = []
    for name, job in jobs.items():
        if args.only and name not in args.only:
            continue
        if args.skip_existing and (OUT / f"{name}.json").exists():
            continue
        t0 = time.perf_counter()
        doc = job()
        if doc is None:
            print(f"no array for {name} within {time.perf_counter() - t0:.1f}s", flush=True)
            missed.append(name)
            continue
        save(doc, name)
    return 1 if missed else 0


if __name__ == "__main__":
    sys.exit(main())
