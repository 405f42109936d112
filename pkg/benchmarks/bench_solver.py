"""Compare the compiled and pure-Python search kernels.

Every case runs with the same seed and a node budget, so both backends walk
the same tree and must agree on verdict and node count.  The report gives
wall time per backend and the speedup.

    python3 benchmarks/bench_solver.py [--repeat 3] [--nodes 200000] [--json]
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from heffter.solver import BACKENDS, SearchConstraints, solve


def cases(nodes: int):
    return [
        ("integer H(4;3) diagonal", SearchConstraints.diagonal("integer_heffter", 4, 3, seed=0)),
        ("integer H(3,3;3,3) unsat", SearchConstraints("integer_heffter", 3, 3, 3, 3)),
        ("SMA(8;4) shiftable", SearchConstraints.diagonal("sma", 8, 4, shiftable=True, seed=0)),
        ("integer H(9;3) diagonal", SearchConstraints.diagonal("integer_heffter", 9, 3, seed=0,
                                                               node_budget=nodes)),
        ("H(7;5) diagonal, capped", SearchConstraints.diagonal("integer_heffter", 7, 5, seed=1,
                                                               node_budget=nodes)),
        ("MR(5;3) diagonal", SearchConstraints.diagonal("mr", 5, 3, seed=0, node_budget=nodes)),
    ]


def run_case(c: SearchConstraints, backend: str, repeat: int):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = solve(c, backend=backend)
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="search kernel benchmark")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--nodes", type=int, default=200_000, help="node cap for the larger cases")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if "cython" not in BACKENDS:
        print("compiled kernel not built; only the python backend is available", file=sys.stderr)
    rows, mismatch = [], False
    for label, c in cases(args.nodes):
        row = {"case": label}
        ref = None
        for backend in BACKENDS:
            out, secs = run_case(c, backend, args.repeat)
            row[backend] = {"verdict": out.verdict, "nodes": out.nodes, "seconds": secs}
            if ref is None:
                ref = (out.verdict, out.nodes)
            elif ref != (out.verdict, out.nodes):
                mismatch = True
        if len(BACKENDS) == 2:
            row["speedup"] = row["python"]["seconds"] / max(row["cython"]["seconds"], 1e-9)
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        head = f"{'case':28} {'verdict':15} {'nodes':>9}" + "".join(f" {b:>10}" for b in BACKENDS)
        print(head + ("  speedup" if len(BACKENDS) == 2 else ""))
        for row in rows:
            first = row[BACKENDS[0]]
            line = f"{row['case']:28} {first['verdict']:15} {first['nodes']:>9}"
            line += "".join(f" {row[b]['seconds'] * 1000:8.1f}ms" for b in BACKENDS)
            if "speedup" in row:
                line += f"  {row['speedup']:6.1f}x"
            print(line)
    if mismatch:
        print("backends disagree on verdict or node count", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
