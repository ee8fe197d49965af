"""Lyapunov-type bounds for a mixed Caputo / Riemann-Liouville boundary value problem.

Submodules:

- ``specialfns``: gamma function, Gauss-Legendre and tanh-sinh quadrature
- ``fracops``: fractional integrals and derivatives on an interval
- ``greenkernel``: the Green function and the solution operator
- ``spectral``: Nystrom discretization, Perron eigenvalue, bounds
- ``cli``: the ``fraclyap`` command
"""

from fraclyap.domain import FracOrders, Interval
from fraclyap.errors import (
    ConvergenceError,
    DomainError,
    FracLyapError,
    KernelEvaluationError,
    NonFiniteIntegrandError,
    QuadratureError,
    StepUnderflowWarning,
)
from fraclyap.greenkernel import ProblemSpec, green_diag, green_eval, green_sup
from fraclyap.specialfns import de_integrate, gamma_fn, gauss_legendre
from fraclyap.spectral import (
    eigen_lower_bound,
    lyapunov_bound,
    lyapunov_check,
    nystrom_matrix,
    smallest_eigenvalue,
)

__version__ = "0.1.0"

__all__ = [
    "FracOrders",
    "Interval",
    "ProblemSpec",
    "FracLyapError",
    "DomainError",
    "QuadratureError",
    "ConvergenceError",
    "NonFiniteIntegrandError",
    "KernelEvaluationError",
    "StepUnderflowWarning",
    "gamma_fn",
    "gauss_legendre",
    "de_integrate",
    "green_eval",
    "green_diag",
    "green_sup",
    "lyapunov_bound",
    "eigen_lower_bound",
    "nystrom_matrix",
    "smallest_eigenvalue",
    "lyapunov_check",
]
