"""Exception hierarchy shared by all modules."""


class SegreError(Exception):
    """Base class for library errors."""


class ShapeError(SegreError, ValueError):
    """Dimension or ragged-matrix mismatch."""


class DegeneracyError(SegreError, ValueError):
    """Repeated points where distinct ones are required."""


class DuplicatePointError(SegreError, ValueError):
    pass


class PreconditionError(SegreError, ValueError):
    pass


class FieldTooSmallError(SegreError):
    """The base field has too few rational points for a construction."""

    def __init__(self, message, min_p=None):
        super().__init__(message)
        self.min_p = min_p


class CenterHitError(SegreError, ValueError):
    """A point lies in the center of a linear projection."""


class UnsupportedFieldError(SegreError):
    """Operation needs a finite field but got the rationals."""


class BudgetExceededError(SegreError):
    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


class FormatError(SegreError, ValueError):
    """Malformed input file; the message names the offending location."""
