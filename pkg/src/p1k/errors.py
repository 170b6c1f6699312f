class P1KError(Exception):
    """Base class for all errors raised by p1k."""


class DimensionMismatch(P1KError, ValueError):
    pass


class ModelMismatch(P1KError, ValueError):
    pass


class WindowTooSmall(P1KError):
    """A ring model was asked for a component outside the degrees it can enumerate."""

    def __init__(self, degree, window=None):
        self.degree = degree
        self.window = window
        msg = f"degree {degree} outside enumerable window"
        if window is not None:
            msg += f" {list(window)}"
        super().__init__(msg)


class NotStronglyGraded(P1KError):
    pass


class ShapeMismatch(P1KError, ValueError):
    pass


class RangeViolation(P1KError):
    pass


class NotChainMap(P1KError):
    pass


class NotVect0(P1KError):
    """Raised when a complex has a summand O(k, l) with k + l < -1."""

    def __init__(self, summand, level=None):
        self.summand = summand
        self.level = level
        where = "" if level is None else f" at chain level {level}"
        super().__init__(f"summand O{tuple(summand)}{where} has k + l < -1")


class TruncationUnstable(P1KError):
    pass


class NonIntegralMultiplicity(P1KError):
    pass


class SchemaError(P1KError, ValueError):
    pass
