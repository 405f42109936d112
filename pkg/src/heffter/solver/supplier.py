"""Ingredient arrays for constructions that rely on results from other works.

Requests are resolved in a fixed order: bundled fixtures, user files (given
directories plus ``HEFFTER_INGREDIENT_PATH``), derivations from constructions
in this package, and finally a bounded search.  Every candidate is verified
against the request before it is returned, and the source is recorded.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Optional

from ..core import DesignParams, PartiallyFilledArray, is_shiftable, transpose
from ..errors import BadConstraints, HeffterError, IngredientUnavailable, NotDiagonal, ParseError
from ..io import Provenance, read_array
from ..verify import verify_diagonal, verify_kind

ENV_PATH = "HEFFTER_INGREDIENT_PATH"
REQUEST_KINDS = ("integer_heffter", "sma", "mr")


@dataclass(frozen=True)
class IngredientRequest:
    """An array of a given kind and shape.  ``diagonal`` asks for ``D_0 .. D_{s-1}``."""

    kind: str
    m: int
    n: int
    s: int
    k: int
    diagonal: bool = False
    shiftable: bool = False

    def __post_init__(self):
        if self.kind not in REQUEST_KINDS:
            raise BadConstraints(f"unknown ingredient kind {self.kind!r}")
        if self.diagonal and (self.m != self.n or self.s != self.k):
            raise BadConstraints("a diagonal ingredient must be square with s == k")

    @classmethod
    def square(cls, kind: str, a: int, b: int, shiftable: bool = False) -> "IngredientRequest":
        return cls(kind, a, a, b, b, diagonal=True, shiftable=shiftable)

    @property
    def params(self) -> DesignParams:
        return DesignParams(self.m, self.n, self.s, self.k)

    @property
    def cells(self) -> int:
        return self.m * self.s

    def describe(self) -> str:
        name = {"integer_heffter": "integer H", "sma": "SMA", "mr": "MR"}[self.kind]
        shape = f"({self.m};{self.s})" if self.diagonal else f"({self.m},{self.n};{self.s},{self.k})"
        words = (["shiftable"] if self.shiftable else []) + (["diagonal"] if self.diagonal else [])
        return " ".join(words + [name + shape])

    def reason(self) -> str:
        words = (["shiftable"] if self.shiftable else []) + (["diagonal"] if self.diagonal else [])
        return "_".join(words + [self.kind])

    def check(self, A: PartiallyFilledArray) -> Optional[PartiallyFilledArray]:
        """Return ``A`` in normal position if it satisfies the request, else None."""
        if A.shape != (self.m, self.n):
            return None
        if self.diagonal:
            from ..reduction import normalize_diagonals
            try:
                A = normalize_diagonals(A, self.s)
            except NotDiagonal:
                return None
            if not verify_diagonal(A, self.s).passed:
                return None
        if not verify_kind(self.kind, A, self.params).passed:
            return None
        if self.shiftable and not is_shiftable(A):
            return None
        return A


@dataclass
class Supplied:
    array: PartiallyFilledArray
    provenance: Provenance


@dataclass(frozen=True)
class InventoryEntry:
    source: str
    path: str
    kind: Optional[str]
    params: Optional[DesignParams]
    valid: bool
    detail: str = ""


def bundled_dirs() -> list:
    root = resources.files("heffter").joinpath("fixtures")
    return [Path(str(root)), Path(str(root.joinpath("ingredients")))]


def env_dirs() -> list:
    raw = os.environ.get(ENV_PATH, "")
    return [Path(p) for p in raw.split(os.pathsep) if p]


class IngredientSupplier:
    """Thread-safe, memoizing resolver for :class:`IngredientRequest`.

    ``solver_nodes``/``solver_secs`` bound the search stage and
    ``solver_max_cells`` keeps it at desk scale; set ``use_solver=False`` to
    skip it entirely.
    """

    def __init__(self, paths=(), use_fixtures: bool = True, use_env: bool = True, use_solver: bool = True,
                 solver_nodes: int = 2_000_000, solver_secs: float = 10.0, solver_max_cells: int = 120,
                 solver_attempts: int = 4):
        self.paths = [Path(p) for p in paths]
        self.use_fixtures = use_fixtures
        self.use_env = use_env
        self.use_solver = use_solver
        self.solver_nodes = solver_nodes
        self.solver_secs = solver_secs
        self.solver_max_cells = solver_max_cells
        self.solver_attempts = solver_attempts
        self._lock = threading.RLock()
        self._cache = {}
        self._failed = {}
        self._index = {}
        self._local = threading.local()

    # -- file sources ---------------------------------------------------

    def add_path(self, path) -> None:
        with self._lock:
            self.paths.append(Path(path))
            self._index.pop("file", None)

    def _dirs(self, source: str) -> list:
        if source == "fixture":
            return bundled_dirs() if self.use_fixtures else []
        return list(self.paths) + (env_dirs() if self.use_env else [])

    def _load_index(self, source: str) -> dict:
        with self._lock:
            if source in self._index:
                return self._index[source]
            index = {}
            for d in self._dirs(source):
                if not d.is_dir():
                    continue
                for path in sorted(d.iterdir()):
                    if path.suffix not in (".json", ".grid"):
                        continue
                    try:
                        doc = read_array(path)
                    except (ParseError, HeffterError, OSError, ValueError):
                        continue
                    if doc.kind is None or doc.params is None:
                        continue
                    p = doc.params
                    index.setdefault((doc.kind, p.m, p.n, p.s, p.k), []).append((path, doc))
            self._index[source] = index
            return index

    def _from_files(self, req: IngredientRequest, source: str) -> Optional[Supplied]:
        index = self._load_index(source)
        keys = [((req.kind, req.m, req.n, req.s, req.k), False)]
        if not req.diagonal:
            keys.append(((req.kind, req.n, req.m, req.k, req.s), True))
        for key, flip in keys:
            for path, doc in index.get(key, ()):
                A = transpose(doc.array) if flip else doc.array
                got = req.check(A)
                if got is not None:
                    detail = path.name + (" (transposed)" if flip else "")
                    if doc.provenance.detail:
                        detail += f"; {doc.provenance.detail}"
                    return Supplied(got, Provenance(source, detail))
        return None

    def inventory(self) -> list:
        """Every readable array in the fixture and user directories, with its verdict."""
        out = []
        for source in ("fixture", "file"):
            for entries in self._load_index(source).values():
                for path, doc in entries:
                    try:
                        ok = verify_kind(doc.kind, doc.array, doc.params).passed
                        detail = ""
                    except (HeffterError, ValueError) as exc:
                        ok, detail = False, str(exc)
                    out.append(InventoryEntry(source, str(path), doc.kind, doc.params, ok, detail))
        return sorted(out, key=lambda e: (e.source, e.path))

    # -- derivations ----------------------------------------------------

    def _derive(self, req: IngredientRequest) -> Optional[Supplied]:
        # a derivation may ask for other ingredients but never for itself
        active = getattr(self._local, "active", None)
        if active is None:
            active = self._local.active = set()
        if req in active:
            return None
        active.add(req)
        try:
            return self._derive_inner(req)
        except (IngredientUnavailable, HeffterError):
            return None
        finally:
            active.discard(req)

    def _derive_inner(self, req: IngredientRequest) -> Optional[Supplied]:
        from . import glue
        a, b = req.m, req.s
        if req.diagonal and b == 4 and req.kind in glue.UNITS:
            A = req.check(glue.glue(req.kind, a))
            if A is not None:
                return Supplied(A, Provenance("derived", f"chained 4-diagonal seeds {glue.split_side(a)}"))
        if req.diagonal and req.kind == "integer_heffter" and b > 4 and b % 4 in (0, 1, 3):
            from ..square import compose_diag_heffter
            r = {0: 4, 1: 5, 3: 3}[b % 4]
            base = self.supply(IngredientRequest.square("integer_heffter", a, r, shiftable=(r == 4)))
            block = self.supply(IngredientRequest.square("integer_heffter", a, 4, shiftable=True))
            A = req.check(compose_diag_heffter(base, b, self, block))
            if A is not None:
                return Supplied(A, Provenance("derived", f"H({a};{r}) widened by {(b - r) // 4} shifted H({a};4)"))
        if req.diagonal and req.kind == "sma" and b != 4:
            from ..square import sma_diag
            A = req.check(sma_diag(a, b, req.shiftable, self))
            if A is not None:
                return Supplied(A, Provenance("derived", f"diagonal SMA({a};{b}) from the square constructions"))
        if req.diagonal and req.kind == "mr" and (a * b) % 2 == 1:
            from ..square import sma_diag
            A = req.check(shift_all(sma_diag(a, b, False, self), (a * b - 1) // 2))
            if A is not None:
                return Supplied(A, Provenance("derived", f"diagonal SMA({a};{b}) plus {(a * b - 1) // 2}"))
        if not req.diagonal:
            d = gcd(req.s, req.k)
            if req.kind == "sma" and req.shiftable and d >= 4 and d % 2 == 0:
                from ..reduction import reduce
                from ..square import sma_diag
                side = req.m * req.s // d
                A = req.check(reduce(sma_diag(side, d, True, self), req.params))
                if A is not None:
                    return Supplied(A, Provenance("derived", f"reduction of a shiftable diagonal SMA({side};{d})"))
            if req.kind == "sma" and req.shiftable and req.s % 2 == 0 and req.k % 2 == 0:
                from ..errors import BadParam
                from ..rect import sma_row_pairing
                try:
                    A = req.check(sma_row_pairing(req.m, req.n, req.s, req.k))
                except BadParam:
                    A = None
                if A is not None:
                    return Supplied(A, Provenance("derived", "row pairing on a staircase skeleton"))
            if req.kind in ("integer_heffter", "sma"):
                from ..rect import construct
                kind = "heffter" if req.kind == "integer_heffter" else "sma"
                built = construct(kind, req.m, req.n, req.s, req.k, supplier=self)
                A = req.check(built.array)
                if A is not None:
                    return Supplied(A, Provenance("derived", built.provenance.detail or built.provenance.tag))
        return None

    # -- search ---------------------------------------------------------

    def _search(self, req: IngredientRequest) -> Optional[Supplied]:
        from . import SearchConstraints, solve_with_restarts
        c = SearchConstraints(req.kind, req.m, req.n, req.s, req.k,
                              skeleton="diagonal" if req.diagonal else "auto", shiftable=req.shiftable,
                              node_budget=self.solver_nodes, time_budget=self.solver_secs, seed=0,
                              symmetry_breaking=False)
        try:
            out = solve_with_restarts(c, self.solver_attempts)
        except BadConstraints:
            return None
        if not out.found:
            return None
        A = req.check(out.array)
        if A is None:
            return None
        detail = f"search: {out.nodes} nodes, {out.elapsed:.2f}s, backend {out.backend}"
        return Supplied(A, Provenance("solver", detail))

    # -- entry points ---------------------------------------------------

    def resolve(self, req: IngredientRequest) -> Supplied:
        with self._lock:
            if req in self._cache:
                return self._cache[req]
            if req in self._failed:
                raise IngredientUnavailable(self._failed[req][0], req.reason(), self._failed[req][1])
        attempted = []
        got = None
        for stage in ("fixture", "file", "derived", "solver"):
            if stage == "fixture":
                if not self.use_fixtures:
                    continue
                got = self._from_files(req, "fixture")
            elif stage == "file":
                got = self._from_files(req, "file")
            elif stage == "derived":
                got = self._derive(req)
            else:
                if not self.use_solver:
                    continue
                if req.cells > self.solver_max_cells:
                    attempted.append(f"solver (skipped: {req.cells} cells > {self.solver_max_cells})")
                    continue
                got = self._search(req)
            if got is not None:
                break
            attempted.append(stage if stage != "solver" else
                             f"solver ({self.solver_attempts}x{self.solver_nodes // max(1, self.solver_attempts)} nodes)")
        with self._lock:
            if got is None:
                msg = f"no source supplied a {req.describe()}"
                self._failed[req] = (msg, attempted)
                raise IngredientUnavailable(msg, req.reason(), attempted)
            self._cache[req] = got
            return got

    def supply(self, req: IngredientRequest) -> PartiallyFilledArray:
        return self.resolve(req).array

    def diagonal_heffter(self, a: int, b: int, shiftable: bool = False) -> PartiallyFilledArray:
        return self.supply(IngredientRequest.square("integer_heffter", a, b, shiftable))

    def diagonal_sma(self, a: int, b: int, shiftable: bool = False) -> PartiallyFilledArray:
        return self.supply(IngredientRequest.square("sma", a, b, shiftable))

    def diagonal_mr(self, a: int, b: int) -> PartiallyFilledArray:
        return self.supply(IngredientRequest.square("mr", a, b))

    def tight_heffter(self, k: int, width: int) -> PartiallyFilledArray:
        """Integer H(k, width; width, k), every cell filled."""
        return self.supply(IngredientRequest("integer_heffter", k, width, width, k))

    def shiftable_rect_sma(self, m: int, n: int, s: int, k: int) -> PartiallyFilledArray:
        return self.supply(IngredientRequest("sma", m, n, s, k, shiftable=True))


def shift_all(A: PartiallyFilledArray, x: int) -> PartiallyFilledArray:
    """Add ``x`` to every filled cell (unlike :func:`core.shift`, which moves away from 0)."""
    return A.map_entries(lambda e: e + x)


_default = None
_default_lock = threading.Lock()


def default_supplier() -> IngredientSupplier:
    global _default
    with _default_lock:
        if _default is None:
            _default = IngredientSupplier()
        return _default


def set_default_supplier(supplier: Optional[IngredientSupplier]) -> None:
    global _default
    with _default_lock:
        _default = supplier
