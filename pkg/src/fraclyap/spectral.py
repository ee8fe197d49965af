"""Nystrom discretization, Perron eigenvalue, and the Lyapunov-type bounds.

A continuous solution of the boundary value problem satisfies
``u(t) = int_a^b G(t, r) q(r) u(r) dr``. With ``q = 1`` the eigenvalues
``lambda`` of the fractional problem are the reciprocals of the eigenvalues
of this integral operator, so the smallest ``|lambda|`` comes from its
Perron (dominant, positive) eigenvalue.

The kernel has a kink on the diagonal, which limits plain Nystrom
quadrature to slow algebraic convergence. By default the matrix uses
singularity subtraction::

    int G(t_i, r) phi(r) dr ~ sum_j w_j G_ij (phi_j - phi_i) + phi_i int G(t_i, r) dr

with the row integral computed to quadrature precision. Only the diagonal
changes; off-diagonal entries are the plain ``w_j G(t_i, t_j) q(t_j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fraclyap.domain import FracOrders, Interval
from fraclyap.errors import ConvergenceError, DomainError, KernelEvaluationError
from fraclyap.greenkernel import (
    DEFAULT_KERNEL_TOL,
    ProblemSpec,
    green_eval,
    green_row_integral,
)
from fraclyap.specialfns import gamma_fn, gauss_legendre

__all__ = [
    "KernelMatrix",
    "EigenPair",
    "SpectralReport",
    "LyapunovReport",
    "lyapunov_bound",
    "eigen_lower_bound",
    "nystrom_matrix",
    "dominant_eigen",
    "smallest_eigenvalue",
    "lyapunov_check",
    "BOUND_SLACK",
    "GAP_LIMIT",
]

# Slack when comparing a computed eigenvalue with its lower bound.
BOUND_SLACK = 1e-9
# A relative change of lambda_min above this between n and 2n is low confidence.
GAP_LIMIT = 1e-4


@dataclass(frozen=True)
class KernelMatrix:
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    entries: np.ndarray
    subtracted: bool = True


@dataclass(frozen=True)
class EigenPair:
    mu: float
    vector: np.ndarray
    iterations: int
    residual: float
    converged: bool = True


@dataclass(frozen=True)
class SpectralReport:
    orders: FracOrders
    interval: Interval
    n: int
    mu_max: float
    lambda_min: float
    eigen_bound: float
    lyap_bound: float
    bound_satisfied: bool
    refinement_gap: float
    low_confidence: bool

    def to_dict(self) -> dict:
        """Flat, ordered mapping used by the JSON and CSV writers."""
        return {
            "alpha": self.orders.alpha,
            "beta": self.orders.beta,
            "a": self.interval.a,
            "b": self.interval.b,
            "n": self.n,
            "mu_max": self.mu_max,
            "lambda_min": self.lambda_min,
            "eigen_bound": self.eigen_bound,
            "lyap_bound": self.lyap_bound,
            "bound_satisfied": self.bound_satisfied,
            "refinement_gap": self.refinement_gap,
            "low_confidence": self.low_confidence,
        }


@dataclass(frozen=True)
class LyapunovReport:
    integral_abs_q: float
    bound: float
    holds: bool
    spectral_radius: float

    @property
    def contrapositive_consistent(self) -> bool:
        """If the integral falls short of the bound, no solution may exist (radius < 1)."""
        return self.holds or self.spectral_radius < 1.0


def lyapunov_bound(orders: FracOrders, iv: Interval) -> float:
    """``(alpha+beta-1) Gamma(alpha) Gamma(beta) / (b-a)^(alpha+beta-1)``.

    A nontrivial continuous solution forces ``int_a^b |q| >= lyapunov_bound``.
    """
    k = orders.total - 1.0
    return k * gamma_fn(orders.alpha) * gamma_fn(orders.beta) / iv.length**k


def eigen_lower_bound(orders: FracOrders, iv: Interval) -> float:
    """Lower bound on ``|lambda|``: :func:`lyapunov_bound` divided by ``b - a``."""
    return lyapunov_bound(orders, iv) / iv.length


def nystrom_matrix(
    spec: ProblemSpec,
    n: int,
    tol: float = DEFAULT_KERNEL_TOL,
    subtract: bool = True,
) -> KernelMatrix:
    """Gauss-Legendre Nystrom matrix of ``u -> int G(., r) q(r) u(r) dr``.

    ``M[i, j] = w_j G(t_i, t_j) q(t_j)``. With ``subtract`` (the default)
    the diagonal carries the singularity-subtraction correction
    ``q_i (int G(t_i, r) dr - sum_j w_j G_ij)``.
    """
    if int(n) != n or n < 4:
        raise DomainError(f"nystrom_matrix needs n >= 4, got {n!r}")
    n = int(n)
    iv, orders = spec.interval, spec.orders
    rule = gauss_legendre(n, iv.a, iv.b)
    x, w = rule.nodes, rule.weights
    q = spec.q_values(x)
    g = green_eval(x[:, None], x[None, :], orders, iv, tol)
    entries = g * (w * q)[None, :]
    if subtract:
        rows = np.atleast_1d(green_row_integral(x, orders, iv, tol * 1e-2))
        entries[np.diag_indices(n)] += q * (rows - g @ w)
    bad = np.argwhere(~np.isfinite(entries))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise KernelEvaluationError(
            f"kernel entry ({i}, {j}) is not finite at t={x[i]:.17g}, r={x[j]:.17g}", index=(i, j)
        )
    entries.flags.writeable = False
    return KernelMatrix(n, x, w, entries, subtract)


def dominant_eigen(M, tol: float = 1e-12, max_iter: int = 50000) -> EigenPair:
    """Power iteration from the all-ones vector.

    The iterate is kept at max-norm 1 with its largest entry equal to +1, and
    the eigenvalue estimate is the corresponding entry of ``M v``. Stops when
    the relative change of the estimate and the relative residual
    ``|M v - mu v|_inf / |mu|`` are both below ``tol``. If ``max_iter`` is
    reached the last iterate is returned with ``converged=False``.
    """
    A = np.asarray(M.entries if isinstance(M, KernelMatrix) else M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("dominant_eigen needs a square matrix")
    if not np.all(np.isfinite(A)):
        raise DomainError("dominant_eigen needs a finite matrix")
    if not np.any(A):
        raise DomainError("the zero matrix has no dominant eigenvalue")

    v = np.ones(A.shape[0])
    mu_prev = math.nan
    mu = math.nan
    residual = math.inf
    for it in range(1, max_iter + 1):
        y = A @ v
        mu = float(y[int(np.argmax(v))])
        residual = float(np.max(np.abs(y - mu * v)))
        k = int(np.argmax(np.abs(y)))
        if y[k] == 0.0:
            raise ConvergenceError("power iteration collapsed to the zero vector", value=0.0)
        change = abs(mu - mu_prev) / abs(mu) if mu != 0.0 else math.inf
        if residual <= tol * abs(mu) and (change <= tol or it == 1):
            return EigenPair(mu, v, it, residual, True)
        v = y / y[k]
        mu_prev = mu
    return EigenPair(mu, v, max_iter, residual, False)


def smallest_eigenvalue(
    orders: FracOrders,
    iv: Interval,
    n: int = 64,
    tol: float = DEFAULT_KERNEL_TOL,
) -> SpectralReport:
    """Smallest ``|lambda|`` of the fractional eigenproblem, with its bounds.

    Solves at ``n`` and ``2n`` nodes; ``lambda_min`` comes from ``2n`` and
    the relative change between the two is reported as ``refinement_gap``.
    """
    if int(n) != n or n < 8:
        raise DomainError(f"smallest_eigenvalue needs n >= 8, got {n!r}")
    n = int(n)
    spec = ProblemSpec(orders, iv)
    coarse = dominant_eigen(nystrom_matrix(spec, n, tol))
    fine = dominant_eigen(nystrom_matrix(spec, 2 * n, tol))
    lam_coarse = 1.0 / coarse.mu
    lam = 1.0 / fine.mu
    gap = abs(lam_coarse - lam) / abs(lam)
    eig_bound = eigen_lower_bound(orders, iv)
    return SpectralReport(
        orders=orders,
        interval=iv,
        n=n,
        mu_max=fine.mu,
        lambda_min=lam,
        eigen_bound=eig_bound,
        lyap_bound=lyapunov_bound(orders, iv),
        bound_satisfied=bool(lam >= eig_bound - BOUND_SLACK),
        refinement_gap=gap,
        low_confidence=bool(gap > GAP_LIMIT or not (coarse.converged and fine.converged)),
    )


def lyapunov_check(spec: ProblemSpec, n: int = 64, tol: float = DEFAULT_KERNEL_TOL) -> LyapunovReport:
    """Compare ``int |q|`` with the Lyapunov bound and estimate the spectral radius.

    The spectral radius is the Perron eigenvalue of the Nystrom matrix built
    with ``|q|``. When the integral is below the bound the radius must be
    below 1: a radius of 1 would mean ``u = K u`` has a nontrivial solution.
    """
    iv = spec.interval
    rule = gauss_legendre(n, iv.a, iv.b)
    abs_q = np.abs(spec.q_values(rule.nodes))
    integral = float(abs_q @ rule.weights)
    bound = lyapunov_bound(spec.orders, iv)
    if not np.any(abs_q):
        radius = 0.0
    else:
        q = spec.q

        def q_abs(t):
            return np.abs(np.asarray(q(t), dtype=float))

        abs_spec = ProblemSpec(spec.orders, iv, q_abs, spec.description)
        radius = dominant_eigen(nystrom_matrix(abs_spec, n, tol)).mu
    return LyapunovReport(integral, bound, bool(integral >= bound), float(radius))

