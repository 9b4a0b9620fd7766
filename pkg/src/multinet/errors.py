"""Exception hierarchy shared across the package."""


class MultinetError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(MultinetError):
    """Invalid input data (negative weights, shape mismatch, bad diagonal)."""


class IngestError(ValidationError):
    """A manifest or matrix file failed to parse or is inconsistent."""


class UndefinedStatisticError(MultinetError):
    """A statistic is mathematically undefined for the given input
    (zero variance, empty graph, zero total weight)."""


class ConvergenceError(MultinetError):
    """The null-model solver did not reach the requested residual.

    Carries the best residual array seen, for diagnostics.
    """

    def __init__(self, message, residuals=None, iterations=None):
        super().__init__(message)
        self.residuals = residuals
        self.iterations = iterations


class InsufficientSampleError(MultinetError):
    """Too few time periods for a resampling estimate."""
