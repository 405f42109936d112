"""Reading and writing arrays in the grid and JSON formats.

Grid format::

    # free comment
    # kind: sma
    # provenance: fixture | free text
    14 14 3 3
    -11   1  10   .   ...

``.`` marks an empty cell and ``#`` starts a comment line.  The first
non-comment line is read as ``m n s k [t lambda]`` when it has four or six
integer tokens and the rest of the text is an ``m x n`` grid; otherwise it is
the first grid row.

JSON format: ``{"kind", "params": {"m","n","s","k"[,"t","lambda"]},
"grid": [[int|null, ...], ...], "provenance": {"tag", "detail"}}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .core import DesignParams, PartiallyFilledArray
from .errors import DimensionMismatch, ParseError

FORMATS = ("json", "grid")


@dataclass(frozen=True)
class Provenance:
    tag: str = ""
    detail: str = ""


@dataclass(frozen=True)
class ArrayDocument:
    array: PartiallyFilledArray
    kind: Optional[str] = None
    params: Optional[DesignParams] = None
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        p = self.params
        if p is not None and self.array.shape != (p.m, p.n):
            raise DimensionMismatch(f"grid is {self.array.rows}x{self.array.cols} but params say {p.m}x{p.n}")

    def with_provenance(self, tag, detail="") -> "ArrayDocument":
        return replace(self, provenance=Provenance(tag, detail))


def guess_format(text: str) -> str:
    return "json" if text.lstrip().startswith("{") else "grid"


def parse_array(text: str, format: Optional[str] = None) -> ArrayDocument:
    format = format or guess_format(text)
    if format == "json":
        return _parse_json(text)
    if format == "grid":
        return _parse_grid(text)
    raise ValueError(f"unknown format {format!r}")


def _reject_float(s):
    raise ParseError(f"non-integer number {s!r}")


def _params_from_dict(d) -> Optional[DesignParams]:
    if d is None:
        return None
    try:
        vals = {key: d[key] for key in ("m", "n", "s", "k")}
    except (KeyError, TypeError):
        raise ParseError("params needs m, n, s, k")
    t, lam = d.get("t"), d.get("lambda")
    for v in list(vals.values()) + [t, lam]:
        if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
            raise ParseError(f"parameter {v!r} is not an integer")
    return DesignParams(vals["m"], vals["n"], vals["s"], vals["k"], t, lam)


def _parse_json(text: str) -> ArrayDocument:
    try:
        obj = json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if isinstance(obj, list):
        obj = {"grid": obj}
    if not isinstance(obj, dict) or "grid" not in obj:
        raise ParseError("expected an object with a 'grid' member")
    grid = obj["grid"]
    if not isinstance(grid, list) or not grid or not all(isinstance(r, list) for r in grid):
        raise ParseError("grid must be a non-empty list of rows")
    width = len(grid[0])
    for i, row in enumerate(grid, 1):
        if len(row) != width:
            raise DimensionMismatch(f"row {i} has {len(row)} cells, expected {width}", i)
        for x in row:
            if x is not None and (isinstance(x, bool) or not isinstance(x, int)):
                raise ParseError(f"cell value {x!r} in row {i} is not an integer or null", i)
    if width == 0:
        raise DimensionMismatch("rows must not be empty")
    prov = obj.get("provenance") or {}
    return ArrayDocument(
        PartiallyFilledArray.from_rows(grid),
        obj.get("kind"),
        _params_from_dict(obj.get("params")),
        Provenance(prov.get("tag", ""), prov.get("detail", "")),
    )


def _token(tok: str, line: int, col: int):
    if tok == ".":
        return None
    try:
        if tok.strip("+-").isdigit():
            return int(tok)
    except ValueError:
        pass
    raise ParseError(f"bad token {tok!r}", line, col)


def _parse_grid(text: str) -> ArrayDocument:
    kind = None
    prov = Provenance()
    rows = []  # (line number, tokens with columns)
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.startswith("kind:"):
                kind = body[5:].strip() or None
            elif body.startswith("provenance:"):
                tag, _, detail = body[11:].partition("|")
                prov = Provenance(tag.strip(), detail.strip())
            continue
        toks = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col) + 1
            toks.append((tok, col))
            col += len(tok) - 1
        rows.append((lineno, toks))
    if not rows:
        raise ParseError("no grid rows found")

    params = None
    first_line, first = rows[0]
    if len(first) in (4, 6) and all(t.isdigit() for t, _ in first):
        vals = [int(t) for t, _ in first]
        m, n = vals[0], vals[1]
        body = rows[1:]
        if m == len(body) and body and all(len(t) == n for _, t in body):
            params = DesignParams(*vals[:4], *(vals[4:6] or (None, None)))
            rows = body
    width = len(rows[0][1])
    grid = []
    for lineno, toks in rows:
        if len(toks) != width:
            raise DimensionMismatch(f"row has {len(toks)} cells, expected {width}", lineno)
        grid.append([_token(t, lineno, c) for t, c in toks])
    return ArrayDocument(PartiallyFilledArray.from_rows(grid), kind, params, prov)


def _params_dict(p: DesignParams) -> dict:
    d = {"m": p.m, "n": p.n, "s": p.s, "k": p.k}
    if p.t is not None:
        d["t"] = p.t
    if p.lam is not None:
        d["lambda"] = p.lam
    return d


def emit_array(doc, format: str = "grid") -> str:
    if isinstance(doc, PartiallyFilledArray):
        doc = ArrayDocument(doc)
    if format == "json":
        obj = {
            "kind": doc.kind,
            "params": None if doc.params is None else _params_dict(doc.params),
            "grid": doc.array.to_lists(),
            "provenance": {"tag": doc.provenance.tag, "detail": doc.provenance.detail},
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    if format != "grid":
        raise ValueError(f"unknown format {format!r}")
    lines = []
    if doc.kind:
        lines.append(f"# kind: {doc.kind}")
    if doc.provenance.tag or doc.provenance.detail:
        detail = " ".join(doc.provenance.detail.split())
        lines.append(f"# provenance: {doc.provenance.tag} | {detail}".rstrip(" |"))
    if doc.params is not None:
        p = doc.params
        head = [p.m, p.n, p.s, p.k]
        if p.t is not None or p.lam is not None:
            head += [p.t or 1, p.lam or 1]
        lines.append(" ".join(map(str, head)))
    width = max((len(str(x)) for _, _, x in doc.array.filled()), default=1)
    for r in doc.array.cells:
        lines.append(" ".join(("." if x is None else str(x)).rjust(width) for x in r))
    return "\n".join(lines) + "\n"


def read_array(path, format: Optional[str] = None) -> ArrayDocument:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if format is None:
        format = "json" if path.suffix == ".json" else guess_format(text)
    return parse_array(text, format)


def write_array(doc, path, format: Optional[str] = None) -> None:
    path = Path(path)
    if format is None:
        format = "json" if path.suffix == ".json" else "grid"
    path.write_text(emit_array(doc, format), encoding="utf-8")
