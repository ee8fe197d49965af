"""Riemann-Liouville integrals and derivatives, and the right Caputo derivative.

All operators take vectorized callables and accept either a scalar or an
array of evaluation points ``t``. Each integral is rescaled onto ``[0, 1]``
so that the kernel singularity sits at an endpoint of the tanh-sinh rule,
whose endpoint distances are exact::

    I_{a+}^p f(t) = (t-a)^p / Gamma(p) * int_0^1 (1-w)^(p-1) f(a + (t-a) w) dw
    I_{b-}^p f(t) = (b-t)^p / Gamma(p) * int_0^1 w^(p-1) f(t + (b-t) w) dw

Orders are restricted to ``0 < p <= 1``.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from fraclyap.domain import Interval, check_order
from fraclyap.errors import DomainError, StepUnderflowWarning
from fraclyap.specialfns import de_integrate, gamma_fn

__all__ = [
    "Anchor",
    "PowerFunction",
    "rl_integral_left",
    "rl_integral_right",
    "rl_derivative_left",
    "caputo_derivative_right",
    "composition_residuals",
    "chebyshev_points",
    "DEFAULT_TOL",
    "DIFF_STEP",
]

DEFAULT_TOL = 1e-12
# Central-difference step relative to the distance from the left endpoint.
DIFF_STEP = 1e-3

Func = Callable[[np.ndarray], np.ndarray]


class Anchor(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


def _inv_gamma(x: float) -> float:
    # 1/Gamma vanishes at the poles 0, -1, -2, ...
    if x <= 0.0 and x == round(x):
        return 0.0
    if x <= 0.0:
        raise DomainError(f"power rule needs Gamma at {x}, outside the supported range")
    return 1.0 / gamma_fn(x)


@dataclass(frozen=True)
class PowerFunction:
    """``coef * (t - point)**mu`` (left anchor) or ``coef * (point - t)**mu`` (right).

    The power rules give every operator in this module in closed form on
    this family, so these functions double as analytic test cases.
    """

    anchor: Anchor
    point: float
    mu: float
    coef: float = 1.0

    def __post_init__(self):
        if not self.mu > -1.0:
            raise DomainError(f"power exponent must exceed -1, got {self.mu!r}")

    def _dist(self, t):
        t = np.asarray(t, dtype=float)
        return t - self.point if self.anchor is Anchor.LEFT else self.point - t

    def __call__(self, t):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.coef * self._dist(t) ** self.mu
        return out if np.ndim(out) else float(out)

    def derivative(self) -> "PowerFunction":
        if self.mu == 0.0 or self.coef == 0.0:
            return PowerFunction(self.anchor, self.point, 0.0, 0.0)
        sign = 1.0 if self.anchor is Anchor.LEFT else -1.0
        return PowerFunction(self.anchor, self.point, self.mu - 1.0, sign * self.coef * self.mu)

    def integral(self, p: float) -> "PowerFunction":
        """Same-side RL integral of order ``p`` (left anchor: ``I_{a+}``, right: ``I_{b-}``)."""
        g = gamma_fn(self.mu + 1.0) / gamma_fn(self.mu + p + 1.0)
        return PowerFunction(self.anchor, self.point, self.mu + p, self.coef * g)

    def rl_derivative(self, p: float) -> "PowerFunction":
        """Left RL derivative of order ``p``; only defined for a left anchor."""
        if self.anchor is not Anchor.LEFT:
            raise DomainError("closed-form left RL derivative needs a left-anchored power")
        g = gamma_fn(self.mu + 1.0) * _inv_gamma(self.mu - p + 1.0)
        if g == 0.0:
            return PowerFunction(self.anchor, self.point, 0.0, 0.0)
        return PowerFunction(self.anchor, self.point, self.mu - p, self.coef * g)


def _points(t):
    t = np.asarray(t, dtype=float)
    return t, t.ndim == 0


def _ret(values, scalar):
    return float(values[0]) if scalar else values


def rl_integral_left(f: Func, p: float, t, a: float, tol: float = DEFAULT_TOL):
    """Left Riemann-Liouville integral ``I_{a+}^p f(t)``; zero at ``t = a``."""
    p = check_order(p)
    t, scalar = _points(t)
    t = np.atleast_1d(t)
    if np.any(t < a):
        raise DomainError(f"rl_integral_left needs t >= a = {a}")
    out = np.zeros(t.shape)
    live = t > a
    if np.any(live):
        tl = t[live][:, None]
        span = tl - a

        def integrand(w, wl, wr):
            s = np.where(wl <= wr, a + span * wl, tl - span * wr)
            return wr ** (p - 1.0) * f(s)

        val = de_integrate(integrand, 0.0, 1.0, tol, distances=True)
        out[live] = span[:, 0] ** p * val / gamma_fn(p)
    return _ret(out, scalar)


def rl_integral_right(f: Func, p: float, t, b: float, tol: float = DEFAULT_TOL):
    """Right Riemann-Liouville integral ``I_{b-}^p f(t)``; zero at ``t = b``."""
    p = check_order(p)
    t, scalar = _points(t)
    t = np.atleast_1d(t)
    if np.any(t > b):
        raise DomainError(f"rl_integral_right needs t <= b = {b}")
    out = np.zeros(t.shape)
    live = t < b
    if np.any(live):
        tl = t[live][:, None]
        span = b - tl

        def integrand(w, wl, wr):
            s = np.where(wl <= wr, tl + span * wl, b - span * wr)
            return wl ** (p - 1.0) * f(s)

        val = de_integrate(integrand, 0.0, 1.0, tol, distances=True)
        out[live] = span[:, 0] ** p * val / gamma_fn(p)
    return _ret(out, scalar)


def rl_derivative_left(f: Func, p: float, t, a: float, tol: float = DEFAULT_TOL):
    """Left Riemann-Liouville derivative ``D_{a+}^p f(t) = d/dt I_{a+}^{1-p} f(t)``.

    The derivative is the five-point central difference with step
    ``DIFF_STEP * (t - a)``. All shifted points go through one batched
    quadrature call, so they share the same refinement level and the
    quadrature error cancels smoothly. Points where the step is lost to
    rounding come back as NaN, with a
    :class:`~fraclyap.errors.StepUnderflowWarning`.
    """
    p = check_order(p)
    t, scalar = _points(t)
    t = np.atleast_1d(t)
    if np.any(~(t > a)):
        raise DomainError(f"rl_derivative_left needs t > a = {a}")
    h = DIFF_STEP * (t - a)
    shifts = (2.0, 1.0, -1.0, -2.0)
    stencil = [t + k * h for k in shifts]
    underflow = (stencil[1] == t) | (stencil[2] == t) | (stencil[3] <= a)
    out = np.full(t.shape, np.nan)
    ok = ~underflow
    if np.any(ok):
        pts = np.concatenate([x[ok] for x in stencil])
        if p == 1.0:
            vals = np.broadcast_to(np.asarray(f(pts), dtype=float), pts.shape)
        else:
            vals = np.atleast_1d(rl_integral_left(f, 1.0 - p, pts, a, tol))
        g2, g1, gm1, gm2 = vals.reshape(4, -1)
        out[ok] = (8.0 * (g1 - gm1) - (g2 - gm2)) / (12.0 * h[ok])
    if np.any(underflow):
        warnings.warn(
            f"difference step underflowed at {int(underflow.sum())} point(s) next to a={a}",
            StepUnderflowWarning,
            stacklevel=2,
        )
    return _ret(out, scalar)


def caputo_derivative_right(f_prime: Func, p: float, t, b: float, tol: float = DEFAULT_TOL):
    """Right Caputo derivative ``-I_{b-}^{1-p} f'(t)``, given ``f'`` explicitly.

    For ``p = 1`` this is ``-f'(t)``.
    """
    p = check_order(p)
    t, scalar = _points(t)
    t = np.atleast_1d(t)
    if np.any(t > b):
        raise DomainError(f"caputo_derivative_right needs t <= b = {b}")
    if p == 1.0:
        out = -np.broadcast_to(np.asarray(f_prime(t), dtype=float), t.shape)
    else:
        out = -np.atleast_1d(rl_integral_right(f_prime, 1.0 - p, t, b, tol))
    return _ret(np.array(out, dtype=float), scalar)


def chebyshev_points(a: float, b: float, n: int = 17) -> np.ndarray:
    """Interior Chebyshev (first kind) points on ``(a, b)``, ascending."""
    k = np.arange(n)
    x = -np.cos((2 * k + 1) * np.pi / (2 * n))
    pts = 0.5 * (a + b) + 0.5 * (b - a) * x
    if n % 2 == 1:
        pts[n // 2] = 0.5 * (a + b)
    return pts


def _derivative_of(f):
    if hasattr(f, "derivative"):
        return f.derivative()
    if hasattr(f, "deriv"):
        return f.deriv()
    raise DomainError("the right composition identity needs test functions with a known derivative")


def composition_residuals(
    p: float,
    test_family: Sequence,
    interval: Interval,
    identity: str = "left",
    n_points: int = 17,
    tol: float = DEFAULT_TOL,
) -> list[float]:
    """Maximum residual of a composition identity for each test function.

    ``identity="left"`` checks ``I_{a+}^p D_{a+}^p f = f - c (t-a)^(p-1)``;
    the constant ``c`` is fitted at the midpoint and the identity is then
    checked at the remaining sample points. ``identity="right"`` checks
    ``I_{b-}^p CD_{b-}^p f = f - f(b)`` at all sample points; there each
    test function needs a ``derivative()`` (or numpy ``deriv()``) method.
    """
    p = check_order(p)
    a, b = interval.a, interval.b
    pts = chebyshev_points(a, b, n_points)
    mid = n_points // 2
    results = []
    for f in test_family:
        f_vals = np.broadcast_to(np.asarray(f(pts), dtype=float), pts.shape)
        if identity == "left":
            lhs = _left_composition(f, p, pts, a, tol)
            basis = (pts - a) ** (p - 1.0)
            c1 = (f_vals[mid] - lhs[mid]) / basis[mid]
            res = lhs - (f_vals - c1 * basis)
            res = np.delete(res, mid)
        elif identity == "right":
            fp = _derivative_of(f)
            fb = float(np.asarray(f(np.array([b])), dtype=float).reshape(-1)[0])

            def caputo(s, fp=fp):
                s = np.asarray(s, dtype=float)
                flat = s.reshape(-1)
                return np.atleast_1d(caputo_derivative_right(fp, p, flat, b, tol)).reshape(s.shape)

            lhs = np.atleast_1d(rl_integral_right(caputo, p, pts, b, tol))
            res = lhs - (f_vals - fb)
        else:
            raise DomainError(f"identity must be 'left' or 'right', got {identity!r}")
        results.append(float(np.max(np.abs(res))))
    return results


# Outer nodes closer than this to the left end are skipped: the inner
# quadrature would underflow there, and the skipped mass is at most of order
# _SKIP_BELOW ** (mu - p + 1) for a (t-a)^mu test function.
_SKIP_BELOW = 1e-150
# Rounding noise of the difference quotient, integrated against the
# logarithmically growing weight near t = a, stays below this level; the
# outer quadrature cannot be asked to resolve finer differences.
_OUTER_TOL_FLOOR = 1e-9


def _shifted(f, a):
    if isinstance(f, PowerFunction):
        return PowerFunction(f.anchor, f.point - a, f.mu, f.coef)
    return lambda x: f(np.asarray(x, dtype=float) + a)


def _left_composition(f, p, pts, a, tol):
    # Work in x = t - a so that points next to the left end keep full
    # relative precision.
    f = _shifted(f, a)
    pts = pts - a

    def dpf(s):
        s = np.asarray(s, dtype=float)
        flat = s.reshape(-1)
        out = np.full(flat.shape, np.nan)
        inside = flat > _SKIP_BELOW
        if np.any(inside):
            out[inside] = rl_derivative_left(f, p, flat[inside], 0.0, tol)
        return out.reshape(s.shape)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StepUnderflowWarning)
        return np.atleast_1d(rl_integral_left(dpf, p, pts, 0.0, max(tol, _OUTER_TOL_FLOOR)))
