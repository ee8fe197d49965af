"""Exception hierarchy shared across the package."""


class FracLyapError(Exception):
    """Base class for all package errors."""


class DomainError(FracLyapError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class QuadratureError(FracLyapError, ArithmeticError):
    """A quadrature rule could not produce a trustworthy value."""


class ConvergenceError(QuadratureError):
    """Refinement stopped at the maximum level without meeting the tolerance.

    The best available estimate is kept on ``value`` and the last
    successive-level difference on ``error``.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class NonFiniteIntegrandError(QuadratureError):
    """The integrand returned NaN or inf away from the interval endpoints."""


class KernelEvaluationError(FracLyapError):
    """Assembly of a kernel matrix failed at a specific entry."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class StepUnderflowWarning(RuntimeWarning):
    """A finite-difference step fell below the floating point resolution."""
