"""Green function of the mixed Caputo / Riemann-Liouville boundary value problem.

For ``a <= r <= t <= b``::

    G(t, r) = 1/(Gamma(alpha) Gamma(beta)) int_a^r (t-s)^(beta-1) (r-s)^(alpha-1) ds

and for ``t <= r`` the integral runs over ``[a, t]`` instead. Writing
``L = min(t, r) - a``, ``d = |t - r|`` and ``rho = d / L`` both branches
reduce to one scaled integral with an endpoint singularity at ``v = 0``::

    G = L^(alpha+beta-1) / (Gamma(alpha) Gamma(beta)) * int_0^1 v^(e1) (rho + v)^(e2) dv

with ``(e1, e2) = (alpha-1, beta-1)`` when ``r <= t`` and the exponents
swapped otherwise. The remaining near-singularity at ``v = -rho`` is
resolved by the clustering of the tanh-sinh nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from fraclyap.domain import FracOrders, Interval
from fraclyap.errors import DomainError
from fraclyap.fracops import PowerFunction, Anchor, rl_integral_left, rl_integral_right
from fraclyap.specialfns import de_integrate, gamma_fn

__all__ = [
    "FracOrders",
    "Interval",
    "ProblemSpec",
    "unit_q",
    "green_eval",
    "green_diag",
    "green_sup",
    "green_row_integral",
    "green_apply_kernel",
    "green_apply_sequential",
    "DEFAULT_KERNEL_TOL",
    "DIAGONAL_GUARD",
]

DEFAULT_KERNEL_TOL = 1e-10
# |t - r| below this fraction of (b - a) is treated as the diagonal.
DIAGONAL_GUARD = 1e-9
_CHUNK = 1024


def unit_q(t):
    """The coefficient ``q = 1`` used by the eigenvalue problem."""
    return np.ones_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class ProblemSpec:
    """The problem ``-CD_{b-}^alpha D_{a+}^beta u + q u = 0`` on ``[a, b]``."""

    orders: FracOrders
    interval: Interval
    q: Callable[[np.ndarray], np.ndarray] = unit_q
    description: str = ""

    def q_values(self, t) -> np.ndarray:
        """``q`` sampled at ``t``; rejects non-finite samples."""
        t = np.asarray(t, dtype=float)
        vals = np.broadcast_to(np.asarray(self.q(t), dtype=float), t.shape).copy()
        if not np.all(np.isfinite(vals)):
            raise DomainError(f"q is not finite on [{self.interval.a}, {self.interval.b}]")
        return vals


def _gamma_product(orders: FracOrders) -> float:
    return gamma_fn(orders.alpha) * gamma_fn(orders.beta)


def green_diag(r, orders: FracOrders, iv: Interval):
    """Closed form ``G(r, r) = (r-a)^(alpha+beta-1) / ((alpha+beta-1) Gamma(alpha) Gamma(beta))``."""
    r_arr = np.asarray(r, dtype=float)
    if np.any((r_arr < iv.a) | (r_arr > iv.b)):
        raise DomainError(f"green_diag needs r in [{iv.a}, {iv.b}]")
    k = orders.total - 1.0
    out = (r_arr - iv.a) ** k / (k * _gamma_product(orders))
    return float(out) if out.ndim == 0 else out


def green_sup(orders: FracOrders, iv: Interval) -> float:
    """``max_r G(r, r)``, attained at ``r = b``."""
    return float(green_diag(iv.b, orders, iv))


def _scaled_integral(rho: np.ndarray, e1: float, e2: float, tol: float) -> np.ndarray:
    """``int_0^1 v^e1 (rho + v)^e2 dv`` for each entry of ``rho > 0``."""
    out = np.empty(rho.shape)
    if rho.size == 0:
        return out
    # Similar rho need similar refinement; sorting keeps easy chunks cheap.
    order = np.argsort(rho, kind="stable")
    for start in range(0, rho.size, _CHUNK):
        idx = order[start:start + _CHUNK]
        rr = rho[idx][:, None]

        def integrand(v, vl, vr, rr=rr):
            return vl**e1 * (rr + vl) ** e2

        out[idx] = de_integrate(integrand, 0.0, 1.0, tol, distances=True)
    return out


def green_eval(t, r, orders: FracOrders, iv: Interval, tol: float = DEFAULT_KERNEL_TOL):
    """Evaluate ``G(t, r)``; ``t`` and ``r`` broadcast against each other.

    Pairs within ``DIAGONAL_GUARD * (b - a)`` of the diagonal use the closed
    form :func:`green_diag` at ``min(t, r)``.
    """
    t_arr, r_arr = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(r, dtype=float))
    scalar = t_arr.ndim == 0
    t_arr, r_arr = np.atleast_1d(t_arr).ravel(), np.atleast_1d(r_arr).ravel()
    a, b = iv.a, iv.b
    outside = (t_arr < a) | (t_arr > b) | (r_arr < a) | (r_arr > b) | np.isnan(t_arr) | np.isnan(r_arr)
    if np.any(outside):
        raise DomainError(f"green_eval needs (t, r) in [{a}, {b}]^2")

    alpha, beta = orders.alpha, orders.beta
    low = np.minimum(t_arr, r_arr)
    span = low - a
    gap = np.abs(t_arr - r_arr)
    out = np.zeros(t_arr.shape)

    diag = gap <= DIAGONAL_GUARD * iv.length
    out[diag] = green_diag(low[diag], orders, iv)

    scale = 1.0 / _gamma_product(orders)
    for mask, e1, e2 in (
        (~diag & (span > 0.0) & (r_arr < t_arr), alpha - 1.0, beta - 1.0),
        (~diag & (span > 0.0) & (t_arr < r_arr), beta - 1.0, alpha - 1.0),
    ):
        if np.any(mask):
            # a subnormal span sends rho to inf; the term then underflows to 0 as it should
            with np.errstate(over="ignore"):
                rho = gap[mask] / span[mask]
            out[mask] = span[mask] ** (alpha + beta - 1.0) * scale * _scaled_integral(rho, e1, e2, tol)

    out = out.reshape(np.shape(np.broadcast_arrays(np.asarray(t), np.asarray(r))[0]))
    return float(out) if scalar else out


def green_row_integral(t, orders: FracOrders, iv: Interval, tol: float = DEFAULT_KERNEL_TOL):
    """``int_a^b G(t, r) dr``, computed as ``I_{a+}^beta [(b-s)^alpha / Gamma(alpha+1)](t)``.

    This is the kernel applied to the constant function 1, with the inner
    right integral done in closed form.
    """
    inner = PowerFunction(Anchor.RIGHT, iv.b, orders.alpha, 1.0 / gamma_fn(orders.alpha + 1.0))
    return rl_integral_left(inner, orders.beta, t, iv.a, max(tol, 1e-14))


def _check_point(t, iv):
    t = float(t)
    if not iv.contains(t):
        raise DomainError(f"t={t} lies outside [{iv.a}, {iv.b}]")
    return t


def green_apply_kernel(f, t: float, spec: ProblemSpec, tol: float = DEFAULT_KERNEL_TOL) -> float:
    """``int_a^b G(t, r) f(r) dr`` by quadrature over ``r``, one kernel call per node.

    The ``r`` range is split at ``r = t``, where ``G`` has a kink, and each
    piece is integrated with the tanh-sinh rule so that the power-type
    behaviour at ``r = a`` and ``r = t`` costs nothing extra.
    """
    iv, orders = spec.interval, spec.orders
    t = _check_point(t, iv)
    total = 0.0
    for lo, hi in ((iv.a, t), (t, iv.b)):
        if hi <= lo:
            continue

        def integrand(r):
            r = np.clip(r, iv.a, iv.b)
            return green_eval(t, r, orders, iv, tol) * np.asarray(f(r), dtype=float)

        total += de_integrate(integrand, lo, hi, tol)
    return float(total)


def green_apply_sequential(f, t: float, spec: ProblemSpec, tol: float = DEFAULT_KERNEL_TOL) -> float:
    """``I_{a+}^beta (I_{b-}^alpha f)(t)``, the form before Fubini is applied.

    Computed as a nested quadrature: the outer left integral calls the inner
    right integral on its whole node array at once.
    """
    iv, orders = spec.interval, spec.orders
    t = _check_point(t, iv)
    inner_tol = max(tol * 1e-2, 1e-14)

    def inner(s):
        s = np.asarray(s, dtype=float)
        flat = np.clip(s.reshape(-1), iv.a, iv.b)
        vals = rl_integral_right(f, orders.alpha, flat, iv.b, inner_tol)
        return np.atleast_1d(vals).reshape(s.shape)

    return float(rl_integral_left(inner, orders.beta, t, iv.a, max(tol, 1e-14)))
