"""Command-line interface.

    heffter construct heffter -m 6 -n 12 -s 6 -k 3
    heffter verify sma path/to/sma_14_3.grid
    heffter reduce path/to/h_12_3.grid -m 6 -n 12 -s 6 -k 3
    heffter solve integer_heffter -m 4 -n 4 -s 3 -k 3 --skeleton diagonal
    heffter show path/to/array.json
    heffter ingredients --ingredients my_dir

Exit codes: 0 success, 1 verification failed, 2 not covered or proven
unsatisfiable, 3 budget exceeded or ingredient unavailable, 4 usage or
parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Optional

from .core import DesignParams, is_shiftable
from .errors import (BadConstraints, BadParam, HeffterError, IngredientUnavailable, NotCovered, ParamMismatch,
                     ParseError)
from .io import FORMATS, ArrayDocument, Provenance, emit_array, read_array
from .verify import KINDS as VERIFY_KINDS
from .verify import verify_diagonal, verify_kind

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NOT_COVERED = 2
EXIT_BUDGET = 3
EXIT_USAGE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_params(p, required: bool):
    p.add_argument("-m", type=int, required=required, help="rows")
    p.add_argument("-n", type=int, required=required, help="columns")
    p.add_argument("-s", type=int, required=required, help="filled cells per row")
    p.add_argument("-k", type=int, required=required, help="filled cells per column")
    p.add_argument("--t", type=int, help="subgroup order for relative arrays")
    p.add_argument("--lambda", dest="lam", type=int, help="fold for relative arrays")


def _add_output(p):
    p.add_argument("--format", choices=FORMATS, default="grid", help="array output format")
    p.add_argument("--json", action="store_true", help="print a machine-readable result object")


def _add_budget(p):
    p.add_argument("--budget-nodes", type=int, help="search node budget")
    p.add_argument("--budget-secs", type=float, help="search time budget in seconds")
    p.add_argument("--seed", type=int, help="search seed")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="heffter", description="Heffter arrays, signed magic arrays and magic rectangles")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build an array from the implemented constructions")
    p.add_argument("kind", nargs="?", choices=("heffter", "sma", "mr"))
    p.add_argument("--kind", dest="kind_opt", choices=("heffter", "sma", "mr"))
    _add_params(p, True)
    _add_output(p)
    _add_budget(p)
    p.add_argument("--ingredients", action="append", default=[], metavar="DIR",
                   help="extra directory of ingredient arrays (repeatable)")
    p.add_argument("--no-solver", action="store_true", help="never search for missing ingredients")

    p = sub.add_parser("verify", help="check an array file against a kind")
    p.add_argument("kind", nargs="?", choices=VERIFY_KINDS)
    p.add_argument("path")
    p.add_argument("--kind", dest="kind_opt", choices=VERIFY_KINDS)
    _add_params(p, False)
    p.add_argument("--diagonal", action="store_true", help="also require s consecutive full diagonals")
    p.add_argument("--shiftable", action="store_true", help="also require shiftability")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("reduce", help="fold a cyclically d-diagonal square onto an m x n grid")
    p.add_argument("path")
    p.add_argument("--kind", dest="kind_opt", choices=VERIFY_KINDS, help="kind used to verify the result")
    _add_params(p, True)
    _add_output(p)

    p = sub.add_parser("solve", help="bounded exhaustive search")
    p.add_argument("kind", nargs="?")
    p.add_argument("--kind", dest="kind_opt")
    _add_params(p, True)
    _add_output(p)
    _add_budget(p)
    p.add_argument("--skeleton", default="auto", choices=("auto", "full", "diagonal", "staircase"))
    p.add_argument("--shiftable", action="store_true")
    p.add_argument("--no-symmetry", action="store_true", help="turn symmetry breaking off")
    p.add_argument("--restarts", type=int, default=1, help="split the budget over seeded restarts")
    p.add_argument("--backend", choices=("python", "cython"))

    p = sub.add_parser("show", help="pretty-print an array file with line sums")
    p.add_argument("path")
    p.add_argument("--format", choices=FORMATS, default="grid")

    p = sub.add_parser("ingredients", help="list and validate the ingredient inventory")
    p.add_argument("--ingredients", action="append", default=[], metavar="DIR")
    p.add_argument("--json", action="store_true")
    return ap


def _kind(args) -> Optional[str]:
    if args.kind and args.kind_opt and args.kind != args.kind_opt:
        raise UsageError(f"conflicting kinds {args.kind!r} and {args.kind_opt!r}")
    return args.kind or args.kind_opt


def _params(args, fallback: Optional[DesignParams] = None) -> Optional[DesignParams]:
    given = [args.m, args.n, args.s, args.k]
    if all(x is None for x in given):
        if fallback is not None and (args.t is not None or args.lam is not None):
            return replace(fallback, t=args.t, lam=args.lam)
        return fallback
    if any(x is None for x in given):
        raise UsageError("give all of -m, -n, -s, -k or none")
    return DesignParams(args.m, args.n, args.s, args.k, args.t, args.lam)


def _print_doc(doc: ArrayDocument, args, extra: Optional[dict] = None) -> None:
    if getattr(args, "json", False):
        out = {"document": json.loads(emit_array(doc, "json"))}
        out.update(extra or {})
        print(json.dumps(out, sort_keys=True))
    else:
        sys.stdout.write(emit_array(doc, args.format))


def _report_json(report) -> dict:
    return {"passed": report.passed,
            "violations": [{"kind": v.kind, "location": str(v.location), "detail": v.detail}
                           for v in report.violations],
            "constants": list(report.observed_constants) if report.observed_constants else None}


def _supplier(args):
    from .solver.supplier import IngredientSupplier
    kw = {}
    if getattr(args, "budget_nodes", None):
        kw["solver_nodes"] = args.budget_nodes
    if getattr(args, "budget_secs", None):
        kw["solver_secs"] = args.budget_secs
    return IngredientSupplier(paths=args.ingredients, use_solver=not getattr(args, "no_solver", False), **kw)


def cmd_construct(args) -> int:
    from .rect import construct
    kind = _kind(args)
    if kind is None:
        raise UsageError("construct needs a kind")
    try:
        built = construct(kind, args.m, args.n, args.s, args.k, supplier=_supplier(args))
    except NotCovered as exc:
        return _fail(args, EXIT_NOT_COVERED, "not covered", str(exc))
    except IngredientUnavailable as exc:
        return _fail(args, EXIT_BUDGET, "ingredient unavailable", str(exc), attempted=exc.attempted)
    _print_doc(built.to_document(), args, {"status": "constructed"})
    return EXIT_OK


def _fail(args, code: int, status: str, message: str, **extra) -> int:
    if getattr(args, "json", False):
        print(json.dumps(dict(status=status, message=message, **extra), sort_keys=True))
    else:
        print(f"{status}: {message}", file=sys.stderr)
    return code


def cmd_verify(args) -> int:
    doc = read_array(args.path)
    kind = _kind(args) or doc.kind
    if kind is None:
        raise UsageError("no kind given and the file does not declare one")
    p = _params(args, doc.params)
    if p is None:
        raise UsageError("no parameters given and the file does not declare them")
    report = verify_kind(kind, doc.array, p)
    if args.diagonal:
        report.violations += verify_diagonal(doc.array, p.s).violations
    if args.shiftable and not is_shiftable(doc.array):
        report.add("Shiftability", "array", "rows/columns do not balance positive and negative entries")
    if args.json:
        print(json.dumps(dict(_report_json(report), kind=kind), sort_keys=True))
    elif report.passed:
        extra = ""
        if report.observed_constants:
            extra = " (row sum {}, column sum {})".format(*report.observed_constants)
        print(f"{kind}({p.m},{p.n};{p.s},{p.k}): passed{extra}")
    else:
        print(f"{kind}({p.m},{p.n};{p.s},{p.k}): {report.summary()}")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_reduce(args) -> int:
    from .reduction import reduce
    doc = read_array(args.path)
    p = _params(args)
    R = reduce(doc.array, p)
    kind = args.kind_opt or doc.kind
    out = ArrayDocument(R, kind, p, Provenance("reduce", f"reduction of {args.path.rsplit('/', 1)[-1]}"))
    if kind is not None:
        report = verify_kind(kind, R, p)
        if not report.passed:
            print(report.summary(), file=sys.stderr)
            _print_doc(out, args, {"status": "failed", "report": _report_json(report)})
            return EXIT_FAILED
    _print_doc(out, args, {"status": "reduced"})
    return EXIT_OK


def cmd_solve(args) -> int:
    from .solver import BUDGET, FOUND, SearchConstraints, solve, solve_with_restarts
    kind = _kind(args)
    if kind is None:
        raise UsageError("solve needs a kind")
    kw = {}
    if args.budget_nodes is not None:
        kw["node_budget"] = args.budget_nodes
    if args.budget_secs is not None:
        kw["time_budget"] = args.budget_secs
    c = SearchConstraints(kind, args.m, args.n, args.s, args.k, skeleton=args.skeleton, shiftable=args.shiftable,
                          t=args.t, lam=args.lam, symmetry_breaking=not args.no_symmetry, seed=args.seed, **kw)
    out = solve_with_restarts(c, args.restarts, args.backend) if args.restarts > 1 else solve(c, args.backend)
    stats = {"verdict": out.verdict, "nodes": out.nodes, "backend": out.backend}
    if out.verdict == FOUND:
        detail = f"search: {out.nodes} nodes, backend {out.backend}"
        _print_doc(ArrayDocument(out.array, kind, c.params, Provenance("solver", detail)), args, stats)
        return EXIT_OK
    code = EXIT_BUDGET if out.verdict == BUDGET else EXIT_NOT_COVERED
    if args.json:
        print(json.dumps(stats, sort_keys=True))
    else:
        print(f"{out.verdict} after {out.nodes} nodes", file=sys.stderr)
    return code


def cmd_show(args) -> int:
    doc = read_array(args.path)
    A = doc.array
    if doc.kind or doc.params:
        p = doc.params
        shape = f" ({p.m},{p.n};{p.s},{p.k})" if p else ""
        print(f"{doc.kind or 'array'}{shape}")
    if doc.provenance.tag or doc.provenance.detail:
        print(f"provenance: {doc.provenance.tag} | {doc.provenance.detail}".rstrip(" |"))
    width = max([len(str(x)) for _, _, x in A.filled()] + [len(str(x)) for x in A.col_sums()] + [1])
    for r, total in zip(A.cells, A.row_sums()):
        print(" ".join(("." if x is None else str(x)).rjust(width) for x in r) + f" | {total}")
    print("-" * ((width + 1) * A.cols - 1))
    print(" ".join(str(x).rjust(width) for x in A.col_sums()))
    return EXIT_OK


def cmd_ingredients(args) -> int:
    from .solver.supplier import IngredientSupplier
    sup = IngredientSupplier(paths=args.ingredients, use_solver=False)
    entries = sup.inventory()
    if args.json:
        rows = [{"source": e.source, "path": e.path, "kind": e.kind, "valid": e.valid, "detail": e.detail,
                 "params": None if e.params is None else [e.params.m, e.params.n, e.params.s, e.params.k]}
                for e in entries]
        print(json.dumps(rows, sort_keys=True))
    else:
        for e in entries:
            p = e.params
            shape = f"({p.m},{p.n};{p.s},{p.k})" if p else "?"
            mark = "ok" if e.valid else "INVALID"
            print(f"{mark:7} {e.source:7} {e.kind or '?':16} {shape:18} {e.path.rsplit('/', 1)[-1]}")
    return EXIT_OK if all(e.valid for e in entries) else EXIT_FAILED


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify, "reduce": cmd_reduce, "solve": cmd_solve,
            "show": cmd_show, "ingredients": cmd_ingredients}


def run_command(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParamMismatch, BadParam, BadConstraints) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HeffterError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
