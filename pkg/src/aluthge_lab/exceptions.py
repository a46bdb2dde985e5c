"""Exception hierarchy for aluthge_lab."""


class AluthgeLabError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(AluthgeLabError, ValueError):
    pass


class ConvergenceFailure(AluthgeLabError, RuntimeError):
    pass


class InvalidWeight(AluthgeLabError, ValueError):
    pass


class InvalidExponent(AluthgeLabError, ValueError):
    pass


class InvalidMeasure(AluthgeLabError, ValueError):
    pass


class ZeroDenominator(AluthgeLabError, ZeroDivisionError):
    pass


class SingularInput(AluthgeLabError, ValueError):
    pass


class MeasureMissing(AluthgeLabError, ValueError):
    pass


class KernelConditionViolated(AluthgeLabError, ValueError):
    pass


class TooShort(AluthgeLabError, ValueError):
    pass


class SearchBudgetExceeded(AluthgeLabError, RuntimeError):
    pass


class GridMismatch(AluthgeLabError, ValueError):
    pass


class MatrixFormatError(AluthgeLabError, ValueError):
    """A matrix file is malformed. ``field`` names the offending field."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ConfigError(AluthgeLabError, ValueError):
    pass


class PropertyViolation(AluthgeLabError):
    """A numerical check of a structural theorem failed."""

    def __init__(self, tag, residual, tolerance):
        super().__init__(f"{tag}: residual {residual:.3e} exceeds {tolerance:.3e}")
        self.tag = tag
        self.residual = residual
        self.tolerance = tolerance
