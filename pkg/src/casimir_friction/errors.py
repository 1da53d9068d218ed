"""Exception hierarchy shared by all casimir_friction modules."""


class FrictionError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FrictionError, ValueError):
    """Input outside the physical domain (zero separation, nonpositive gap, ...)."""


class ParameterError(FrictionError, ValueError):
    """Numerical control parameter out of its allowed range."""


class ConvergenceError(FrictionError):
    """A numerical scheme could not reach the requested tolerance.

    The achieved error estimate is stored in ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class InternalConsistencyError(FrictionError):
    """Two redundant evaluation routes disagreed beyond tolerance."""


class PoleError(FrictionError, ZeroDivisionError):
    """Evaluation requested exactly at a pole; the location is in ``pole``."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class DistributionalError(FrictionError):
    """The requested quantity is a distribution, not a number.

    Raised for pointwise evaluation of sharp spectral lines and for the
    overlap of two sharp lines; use the integral APIs or the sharp-mode
    strength functions instead.
    """


class ResolutionError(FrictionError, ValueError):
    """Sampled data too coarse for the fastest relevant frequency."""


class ConfigError(FrictionError, ValueError):
    """Invalid run configuration; ``field`` holds the offending field path."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
