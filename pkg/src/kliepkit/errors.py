"""Exception hierarchy shared by every kliepkit module."""


class KliepError(Exception):
    """Base class for all kliepkit errors."""


class DimensionError(KliepError, ValueError):
    pass


class EmptySampleError(KliepError, ValueError):
    pass


class UnsupportedDimensionError(KliepError, ValueError):
    pass


class ConfigError(KliepError, ValueError):
    pass


class NumericalError(KliepError, ArithmeticError):
    pass


class SolverError(KliepError, RuntimeError):
    """An iterative or LP solver stopped without a usable answer.

    ``diagnostics`` carries whatever the solver reported (status code,
    message, iteration count).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NotPositiveDefinite(KliepError, ValueError):
    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue
