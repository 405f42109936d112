"""Exception types raised across the package."""


class HeffterError(Exception):
    """Base class for every error raised by this package."""


class NonSquare(HeffterError):
    pass


class ZeroEntry(HeffterError):
    pass


class Overlap(HeffterError):
    pass


class OutOfBounds(HeffterError):
    pass


class ParamMismatch(HeffterError):
    pass


class BadRelativeParams(ParamMismatch):
    pass


class BadParam(HeffterError):
    pass


class NotDiagonal(HeffterError):
    pass


class CollisionDetected(HeffterError):
    pass


class NotShiftable(HeffterError):
    pass


class BadConstraints(HeffterError):
    pass


class NotCovered(HeffterError):
    """No implemented theorem covers the requested parameters."""


class IngredientUnavailable(HeffterError):
    """An ingredient array could not be obtained from any source.

    ``reason`` is a short machine-readable token naming the missing
    construction; ``attempted`` lists the sources that were tried.
    """

    def __init__(self, message, reason="unavailable", attempted=()):
        super().__init__(message)
        self.reason = reason
        self.attempted = list(attempted)


class ParseError(HeffterError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class DimensionMismatch(ParseError):
    pass
