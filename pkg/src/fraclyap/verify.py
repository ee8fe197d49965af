"""Numerical checks of the Green function properties and operator identities.

Each check returns a :class:`CheckResult` holding the worst observed
residual and the limit it is held to.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fraclyap.domain import FracOrders, Interval
from fraclyap.fracops import Anchor, PowerFunction, composition_residuals
from fraclyap.greenkernel import (
    DEFAULT_KERNEL_TOL,
    ProblemSpec,
    green_apply_kernel,
    green_apply_sequential,
    green_diag,
    green_eval,
    green_sup,
)

NONNEG_SLACK = 1e-12
DIAG_MAX_SLACK = 1e-9
FUBINI_LIMIT = 1e-7
COMPOSITION_LIMIT = 1e-7
CLASSICAL_LIMIT = 1e-12
GRID_SIZE = 101
FUBINI_POINTS = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    limit: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<34s} max_residual={self.value:.3e}  limit={self.limit:.1e}"


def _grid(iv: Interval, m: int) -> np.ndarray:
    g = np.linspace(iv.a, iv.b, m)
    g[-1] = iv.b
    return g


def green_grid(orders: FracOrders, iv: Interval, m: int = GRID_SIZE, tol: float = DEFAULT_KERNEL_TOL):
    """``G`` on an ``m x m`` uniform grid; rows index ``t``, columns ``r``."""
    g = _grid(iv, m)
    return g, green_eval(g[:, None], g[None, :], orders, iv, tol)


def kernel_property_checks(orders: FracOrders, iv: Interval, m: int = GRID_SIZE, tol: float = DEFAULT_KERNEL_TOL):
    """Nonnegativity, diagonal maximum, monotone diagonal and supremum on a grid."""
    tag = f"({orders.alpha:g},{orders.beta:g})"
    grid, G = green_grid(orders, iv, m, tol)
    diag = np.asarray(green_diag(grid, orders, iv))
    sup = green_sup(orders, iv)

    most_negative = max(0.0, -float(G.min()))
    excess = max(0.0, float(np.max(G - diag[None, :])))
    drops = max(0.0, float(-np.min(np.diff(diag))))
    top = float(diag.max())
    return [
        CheckResult(f"kernel nonnegative {tag}", most_negative, NONNEG_SLACK, most_negative <= NONNEG_SLACK),
        CheckResult(f"kernel diagonal max {tag}", excess, DIAG_MAX_SLACK, excess <= DIAG_MAX_SLACK),
        CheckResult(f"kernel diagonal monotone {tag}", drops, 0.0, drops == 0.0),
        CheckResult(
            f"kernel sup at r=b {tag}",
            abs(top - sup),
            0.0,
            top == sup and int(np.argmax(diag)) == diag.size - 1,
        ),
    ]


def classical_kernel_check(iv: Interval, m: int = GRID_SIZE, tol: float = DEFAULT_KERNEL_TOL) -> CheckResult:
    """For ``alpha = beta = 1`` the kernel is ``min(t, r) - a``."""
    grid, G = green_grid(FracOrders(1.0, 1.0), iv, m, tol)
    exact = np.minimum(grid[:, None], grid[None, :]) - iv.a
    err = float(np.max(np.abs(G - exact)))
    return CheckResult("classical kernel min(t,r)", err, CLASSICAL_LIMIT, err <= CLASSICAL_LIMIT)


def fubini_check(
    orders: FracOrders,
    iv: Interval,
    funcs=None,
    points=FUBINI_POINTS,
    tol: float = DEFAULT_KERNEL_TOL,
) -> CheckResult:
    """Kernel form against nested-integral form of the solution operator."""
    if funcs is None:
        funcs = {
            "1": lambda r: np.ones_like(np.asarray(r, dtype=float)),
            "sin": lambda r: np.sin(np.pi * (np.asarray(r, dtype=float) - iv.a) / iv.length),
        }
    spec = ProblemSpec(orders, iv)
    worst = 0.0
    for f in funcs.values():
        for frac in points:
            t = iv.a + frac * iv.length
            k = green_apply_kernel(f, t, spec, tol)
            s = green_apply_sequential(f, t, spec, tol)
            worst = max(worst, abs(k - s))
    tag = f"({orders.alpha:g},{orders.beta:g})"
    return CheckResult(f"fubini kernel vs sequential {tag}", worst, FUBINI_LIMIT, worst <= FUBINI_LIMIT)


def left_family(p: float, a: float):
    """Power functions for the left composition identity; the first is annihilated by D^p."""
    return [
        PowerFunction(Anchor.LEFT, a, p - 1.0),
        PowerFunction(Anchor.LEFT, a, 0.0),
        PowerFunction(Anchor.LEFT, a, 0.5),
        PowerFunction(Anchor.LEFT, a, 1.0),
        PowerFunction(Anchor.LEFT, a, 2.0),
    ]


def right_family(iv: Interval):
    """Polynomials of degree <= 3 for the right composition identity."""
    return [
        PowerFunction(Anchor.LEFT, iv.a, 0.0, 2.5),
        PowerFunction(Anchor.RIGHT, iv.b, 1.0),
        PowerFunction(Anchor.LEFT, iv.a, 2.0),
        PowerFunction(Anchor.RIGHT, iv.b, 3.0, -0.5),
        np.polynomial.Polynomial([1.0, -2.0, 0.5, 1.5]),
    ]


def composition_checks(p: float, iv: Interval, tol: float = 1e-12):
    left = max(composition_residuals(p, left_family(p, iv.a), iv, "left", tol=tol))
    right = max(composition_residuals(p, right_family(iv), iv, "right", tol=tol))
    return [
        CheckResult(f"composition left p={p:g}", left, COMPOSITION_LIMIT, left <= COMPOSITION_LIMIT),
        CheckResult(f"composition right p={p:g}", right, COMPOSITION_LIMIT, right <= COMPOSITION_LIMIT),
    ]


def run_all(orders: FracOrders, iv: Interval, tol: float = DEFAULT_KERNEL_TOL):
    """Every check used by ``fraclyap verify``."""
    results = []
    for p in sorted({orders.alpha, orders.beta}):
        results.extend(composition_checks(p, iv))
    results.append(fubini_check(orders, iv, tol=tol))
    results.extend(kernel_property_checks(orders, iv, tol=tol))
    results.append(classical_kernel_check(iv, tol=tol))
    return results
