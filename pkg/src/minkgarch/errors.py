"""Exception hierarchy.

``DataError`` covers anything caused by the input data or model parameters
(the CLI maps it to exit code 2); ``BlowUp`` is a numerical divergence
(exit code 4).
"""


class DataError(ValueError):
    """Base class for data and model errors."""


class MalformedRow(DataError):
    pass


class NonPositivePrice(DataError):
    pass


class NonMonotoneTime(DataError):
    pass


class TooShort(DataError):
    pass


class ZeroVariance(DataError):
    pass


class InvalidParams(DataError):
    pass


class InsufficientData(DataError):
    pass


class DegenerateData(DataError):
    pass


class NegativeShock(DataError):
    pass


class ZeroAlpha1(DataError):
    pass


class SingularDesign(DataError):
    pass


class InsufficientPositiveLags(DataError):
    pass


class InvalidFit(DataError):
    pass


class NoRealRoot(DataError):
    pass


class ZeroKurtosis(DataError):
    pass


class GridTooSmall(DataError):
    pass


class BlowUp(ArithmeticError):
    """Raised when an ODE trajectory diverges (approaching a pole)."""
