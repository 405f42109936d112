"""Heffter arrays, signed magic arrays and magic rectangles.

Constructions, the square-to-rectangle reduction, verifiers, a bounded
exhaustive search and an ingredient supplier for arrays built elsewhere.
"""

from .core import DesignParams, PartiallyFilledArray, is_shiftable, shift, transpose
from .errors import HeffterError, IngredientUnavailable, NotCovered
from .io import ArrayDocument, Provenance, emit_array, parse_array, read_array, write_array
from .reduction import reduce
from .verify import verify_kind

__version__ = "0.1.0"

__all__ = [
    "ArrayDocument", "DesignParams", "HeffterError", "IngredientUnavailable", "NotCovered",
    "PartiallyFilledArray", "Provenance", "emit_array", "is_shiftable", "parse_array", "read_array",
    "reduce", "shift", "transpose", "verify_kind", "write_array",
]
