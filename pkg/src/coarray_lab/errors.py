"""Exception types shared across the package."""


class CoarrayLabError(Exception):
    """Base class for errors raised by this package."""


class EstimationError(CoarrayLabError):
    """An estimation stage could not produce a usable result.

    Attributes
    ----------
    stage : str
        Pipeline stage that failed, e.g. ``"subspace"`` or ``"rotation"``.
    """

    def __init__(self, message, stage):
        super().__init__(message)
        self.stage = stage


class RankDeficiencyError(EstimationError):
    """A matrix that must have full column rank is numerically rank deficient."""

    def __init__(self, message, stage="rotation"):
        super().__init__(message, stage)


class EigenGapError(CoarrayLabError):
    """The signal/noise eigenvalue gap is not positive, so a bound is undefined."""


class ConfigError(CoarrayLabError):
    """An experiment configuration file or mapping is invalid."""
