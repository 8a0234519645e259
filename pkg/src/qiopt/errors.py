"""Exception hierarchy shared by all modules."""


class QioptError(Exception):
    """Base class for library errors."""


class InputError(QioptError, ValueError):
    """Invalid argument: bad dimensions, out-of-domain values, bad config."""


class FormatError(InputError):
    """A problem, dataset or model file could not be parsed."""


class CapacityError(QioptError):
    """The request exceeds a hard size cap (e.g. exhaustive enumeration)."""


class NumericError(QioptError, ArithmeticError):
    """A computation produced non-finite values."""
