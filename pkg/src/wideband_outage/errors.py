"""Exception types shared across the package."""


class WidebandOutageError(Exception):
    """Base class for every error raised by this package."""


class ZeroMeanError(WidebandOutageError):
    """The rate-slope distribution has no positive mean, so no finite
    minimum energy per nat exists."""


class NoConvergenceError(WidebandOutageError):
    """An iterative search failed to bracket or converge."""


class InvalidParamError(WidebandOutageError, ValueError):
    """Model or protocol parameter outside its valid range."""


class NotHermitianError(WidebandOutageError, ValueError):
    """Matrix argument is not conjugate-symmetric within tolerance."""


class BelowEtaBarError(WidebandOutageError):
    """Requested energy per nat lies below the wideband minimum."""


class DomainError(WidebandOutageError):
    """Objective evaluated where one of its logarithms is undefined."""


class InvalidConfigError(WidebandOutageError, ValueError):
    """Simulation configuration is inconsistent."""


class InsufficientDataError(WidebandOutageError):
    """Not enough usable points for a fit."""
