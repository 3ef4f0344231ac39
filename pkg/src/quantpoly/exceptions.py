"""Exception types raised by quantpoly."""


class QuantpolyError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(QuantpolyError, ValueError):
    """An argument is outside its admissible range."""


class InsufficientDataError(QuantpolyError, ValueError):
    """The sample is too small for the requested operation."""


class EmptyBinError(QuantpolyError, ValueError):
    """A bin has no members."""


class DegenerateSupportError(QuantpolyError, ValueError):
    """A bin support ``[a, b]`` has ``a >= b``."""


class IllConditionedError(QuantpolyError, ArithmeticError):
    """A moment system is numerically singular.

    Carries the grid coordinates so the caller can mark the cell infeasible.
    """

    def __init__(self, message, condition=float("inf"), n_bins=None, n_moments=None):
        super().__init__(message)
        self.condition = condition
        self.n_bins = n_bins
        self.n_moments = n_moments


class InvalidModelError(QuantpolyError, ValueError):
    """A model CDF returned values outside ``[0, 1]``."""


class DegreesOfFreedomError(QuantpolyError, ValueError):
    """``N <= N_B * N_M`` so the GoF standard error is undefined."""
