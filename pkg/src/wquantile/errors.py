"""Exception hierarchy shared by all modules."""


class WeightedQuantileError(ValueError):
    """Base class for every error raised by this package."""


class DomainError(WeightedQuantileError):
    """An argument lies outside the mathematical domain of an operation."""


class EmptySampleError(WeightedQuantileError):
    """Nothing is left to estimate from (no values or zero total weight)."""


class UnsupportedTypeError(WeightedQuantileError):
    """Hyndman-Fan type outside of 4..9."""
