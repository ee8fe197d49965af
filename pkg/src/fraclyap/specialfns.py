"""Gamma function and the quadrature rules used throughout the package.

Two integration rules are provided:

* Gauss-Legendre nodes and weights for smooth integrands, generated by
  Newton iteration on the three-term Legendre recurrence.
* Double-exponential (tanh-sinh) quadrature for integrands with integrable
  power singularities at one or both endpoints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from fraclyap.errors import ConvergenceError, DomainError, NonFiniteIntegrandError

__all__ = [
    "RuleKind",
    "QuadratureRule",
    "DEInfo",
    "gamma_fn",
    "gauss_legendre",
    "de_integrate",
]

# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments.

    Arguments below one are shifted up with ``gamma(x) = gamma(x + 1) / x``
    so the Lanczos sum is only ever evaluated on ``[1, inf)``. Integer
    arguments return the exact factorial.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma_fn requires a finite positive argument, got {x!r}")
    if x.is_integer() and x <= 171.0:
        return float(math.factorial(int(x) - 1))
    if x < 1.0:
        return gamma_fn(x + 1.0) / x
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * acc


class RuleKind(enum.Enum):
    SMOOTH = "smooth"
    DOUBLE_EXPONENTIAL = "double_exponential"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of a fixed integration rule on ``[a, b]``."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: RuleKind
    a: float
    b: float

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1 or self.nodes.size < 1:
            raise DomainError("nodes and weights must be 1-d arrays of equal, nonzero length")
        if np.any(self.weights <= 0.0):
            raise DomainError("quadrature weights must be positive")
        if np.any(np.diff(self.nodes) <= 0.0):
            raise DomainError("quadrature nodes must be strictly increasing")
        self.nodes.flags.writeable = False
        self.weights.flags.writeable = False

    def __len__(self):
        return self.nodes.size

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        values = np.broadcast_to(np.asarray(f(self.nodes), dtype=float), self.nodes.shape)
        return float(values @ self.weights)


def _legendre_roots(n: int) -> tuple[np.ndarray, np.ndarray]:
    # Tricomi's initial guess, descending in x.
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-16:
            break
    # One more recurrence pass so the derivative matches the final nodes.
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return x[::-1].copy(), w[::-1].copy()


@lru_cache(maxsize=64)
def _reference_gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _legendre_roots(n)
    # Symmetrize: the rule is exactly symmetric about 0.
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    if n % 2 == 1:
        x[n // 2] = 0.0
    return x, w


def gauss_legendre(n: int, a: float, b: float) -> QuadratureRule:
    """n-point Gauss-Legendre rule on ``[a, b]``, exact through degree ``2n - 1``.

    Examples
    --------
    >>> rule = gauss_legendre(2, -1.0, 1.0)
    >>> [round(float(v), 12) for v in rule.nodes]
    [-0.57735026919, 0.57735026919]
    """
    if int(n) != n or n < 1:
        raise DomainError(f"gauss_legendre needs n >= 1, got {n!r}")
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise DomainError(f"gauss_legendre needs finite a < b, got [{a}, {b}]")
    x, w = _reference_gauss_legendre(int(n))
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return QuadratureRule(mid + half * x, half * w, RuleKind.SMOOTH, a, b)


# ---------------------------------------------------------------------------
# double-exponential quadrature
# ---------------------------------------------------------------------------

MAX_LEVEL = 12
MIN_LEVEL = 3
# Non-finite integrand values are tolerated (and dropped) only this close to
# an endpoint, relative to the interval length.
ENDPOINT_ZONE = 1e-8
_TINY = np.finfo(float).tiny
_EPS = np.finfo(float).eps


class DEInfo(NamedTuple):
    """Diagnostics returned by :func:`de_integrate` with ``full_output=True``."""

    error: float
    level: int
    converged: bool
    evaluations: int


@lru_cache(maxsize=None)
def _de_level(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes added at ``level`` for the tanh-sinh map of ``[0, 1]``.

    Returns the distance of each node to the left end, its distance to the
    right end, and the (unscaled) weight. Level 0 is the step-1 grid; level
    ``k`` adds the odd multiples of ``2**-k``. Both distances are computed
    directly so that neither loses precision near its endpoint.
    """
    if level == 0:
        steps = np.arange(-8, 9, dtype=float)
    else:
        h = 2.0**-level
        m = int(np.ceil(8.0 / h))
        steps = (2.0 * np.arange(-(m // 2) - 1, m // 2 + 1) + 1.0) * h
        steps = steps[np.abs(steps) <= 8.0]
    with np.errstate(over="ignore"):
        s = np.pi * np.sinh(steps)
        left = 1.0 / (1.0 + np.exp(-s))
        right = 1.0 / (1.0 + np.exp(s))
        w = np.pi * np.cosh(steps) * left * right
    keep = (np.minimum(left, right) > _TINY) & (w > 0.0) & np.isfinite(w)
    out = (left[keep], right[keep], w[keep])
    for arr in out:
        arr.flags.writeable = False
    return out


def de_integrate(
    f: Callable[..., np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-12,
    *,
    max_level: int = MAX_LEVEL,
    min_level: int = MIN_LEVEL,
    distances: bool = False,
    full_output: bool = False,
):
    """Integrate ``f`` over ``[a, b]`` with tanh-sinh quadrature.

    The step is halved level by level (starting from 1) until two successive
    levels agree to ``tol``. Integrable power singularities at either
    endpoint need no special treatment.

    Parameters
    ----------
    f : callable
        Vectorized integrand. Called with a 1-d array ``x`` of nodes, or
        with ``(x, x - a, b - x)`` when ``distances`` is true; the distances
        are accurate to full relative precision even where ``x`` itself
        rounds onto an endpoint. May return an array of shape ``(..., K)``
        to integrate a batch of integrands sharing the same nodes; the
        refinement then stops when every member has converged.
    a, b : float
        Finite limits with ``a < b``.
    tol : float
        Absolute tolerance on the successive-level difference, not below
        ``1e-14``. A relative floor of a few ulps is always allowed.
    full_output : bool
        If true, return ``(value, DEInfo)``.

    Raises
    ------
    ConvergenceError
        The difference still exceeds ``tol`` at ``max_level``.
    NonFiniteIntegrandError
        ``f`` returned NaN/inf at a node that is not next to an endpoint.
    """
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise DomainError(f"de_integrate needs finite a < b, got [{a}, {b}]")
    if not tol >= 1e-14:
        raise DomainError(f"de_integrate tolerance must be >= 1e-14, got {tol!r}")
    if not 0 <= min_level <= max_level:
        raise DomainError("need 0 <= min_level <= max_level")

    length = b - a
    total = None
    prev = None
    evaluations = 0
    err = math.inf
    for level in range(max_level + 1):
        left, right, w = _de_level(level)
        x = np.where(left <= right, a + length * left, b - length * right)
        with np.errstate(all="ignore"):
            if distances:
                y = f(x, length * left, length * right)
            else:
                y = f(x)
        y = np.asarray(y, dtype=float)
        if y.ndim == 0 or y.shape[-1] == 1:
            y = np.broadcast_to(y, y.shape[:-1] + x.shape)
        elif y.shape[-1] != x.size:
            raise DomainError(f"integrand returned shape {y.shape} for {x.size} nodes")
        evaluations += x.size
        bad = ~np.isfinite(y)
        if bad.any():
            near = np.minimum(left, right) <= ENDPOINT_ZONE
            if np.any(bad & ~near):
                raise NonFiniteIntegrandError(
                    "integrand is not finite away from the endpoints of "
                    f"[{a}, {b}]"
                )
            y = np.where(bad, 0.0, y)
        part = y @ w
        total = part if total is None else total + part
        value = total * (length * 2.0**-level)
        if prev is not None:
            diff = np.abs(value - prev)
            err = float(np.max(diff))
            floor = 8.0 * _EPS * np.abs(value)
            if level >= min_level and np.all(diff <= np.maximum(tol, floor)):
                return _finish(value, DEInfo(err, level, True, evaluations), full_output)
        prev = value
    raise ConvergenceError(
        f"double-exponential quadrature on [{a}, {b}] did not reach tol={tol:g} "
        f"by level {max_level} (last difference {err:.3g})",
        value=_as_output(prev),
        error=err,
    )


def _as_output(value):
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


def _finish(value, info, full_output):
    out = _as_output(value)
    return (out, info) if full_output else out
