import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gamma as sp_gamma, hyp2f1

from fraclyap.domain import FracOrders, Interval
from fraclyap.errors import DomainError
from fraclyap.greenkernel import (
    ProblemSpec,
    green_apply_kernel,
    green_apply_sequential,
    green_diag,
    green_eval,
    green_row_integral,
    green_sup,
)

UNIT = Interval(0.0, 1.0)


def green_hyp(t, r, alpha, beta, a=0.0):
    """Closed form through 2F1, written independently of the package."""
    t, r = t - a, r - a
    low, d = min(t, r), abs(t - r)
    if low == 0.0:
        return 0.0
    e1, e2 = (alpha, beta) if r <= t else (beta, alpha)
    if d == 0.0:
        j = 1.0 / (alpha + beta - 1.0)
    else:
        rho = d / low
        j = rho ** (e2 - 1.0) / e1 * hyp2f1(1.0 - e2, e1, e1 + 1.0, -1.0 / rho)
    return low ** (alpha + beta - 1.0) * j / (sp_gamma(alpha) * sp_gamma(beta))


def test_diag_known_values():
    assert green_diag(0.5, FracOrders(0.75, 0.75), UNIT) == pytest.approx(0.9417755404437489, rel=1e-13)
    assert green_diag(1.0, FracOrders(0.6, 0.8), UNIT) == pytest.approx(1.4419511985598424, rel=1e-13)
    assert green_sup(FracOrders(0.9, 0.9), UNIT) == pytest.approx(1.0946022681416653, rel=1e-13)


def test_classical_kernel_is_min():
    orders = FracOrders(1.0, 1.0)
    assert green_eval(1.0, 0.3, orders, UNIT) == pytest.approx(0.3, abs=1e-14)
    assert green_eval(0.2, 0.9, orders, UNIT) == pytest.approx(0.2, abs=1e-14)


def test_close_to_diagonal():
    # the kernel only has a d^(alpha+beta-1) modulus of continuity here
    orders = FracOrders(0.5, 0.75)
    for r in (0.5 - 1e-7, 0.5 + 1e-7, 0.5 - 1e-3):
        assert green_eval(0.5, r, orders, UNIT) == pytest.approx(green_hyp(0.5, r, 0.5, 0.75), rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0.52, 1.0),
    st.floats(0.52, 1.0),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
)
def test_matches_hypergeometric_form(alpha, beta, t, r):
    orders = FracOrders(alpha, beta)
    ref = green_hyp(t, r, alpha, beta)
    got = green_eval(t, r, orders, UNIT)
    assert got == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_shifted_interval_and_broadcasting():
    iv = Interval(-1.0, 1.5)
    orders = FracOrders(0.7, 0.8)
    t = np.linspace(-1.0, 1.5, 7)
    grid = green_eval(t[:, None], t[None, :], orders, iv)
    assert grid.shape == (7, 7)
    for i in (1, 3, 6):
        for j in (0, 2, 5):
            assert grid[i, j] == pytest.approx(green_hyp(t[i], t[j], 0.7, 0.8, a=-1.0), rel=1e-9, abs=1e-14)
    assert np.all(grid[0] == 0.0) and np.all(grid[:, 0] == 0.0)


def test_out_of_domain():
    with pytest.raises(DomainError):
        green_eval(1.5, 0.3, FracOrders(1.0, 1.0), UNIT)
    with pytest.raises(DomainError):
        green_eval(0.5, math.nan, FracOrders(1.0, 1.0), UNIT)


def test_row_integral_matches_kernel_of_one():
    orders = FracOrders(0.7, 0.8)
    spec = ProblemSpec(orders, UNIT)
    for t in (0.1, 0.5, 1.0):
        k = green_apply_kernel(lambda r: np.ones_like(r), t, spec)
        assert green_row_integral(t, orders, UNIT) == pytest.approx(k, abs=1e-9)


def test_row_integral_classical():
    # int_0^1 min(t, r) dr = t - t^2/2
    t = np.array([0.25, 0.5, 1.0])
    np.testing.assert_allclose(green_row_integral(t, FracOrders(1.0, 1.0), UNIT), t - t**2 / 2, rtol=1e-12)


@pytest.mark.parametrize("alpha,beta", [(0.7, 0.8), (0.5, 0.9), (1.0, 1.0)])
def test_kernel_and_sequential_agree(alpha, beta):
    spec = ProblemSpec(FracOrders(alpha, beta), UNIT)
    for f in (lambda r: np.ones_like(r), lambda r: np.sin(np.pi * r)):
        for t in (0.25, 0.5, 0.75):
            assert abs(green_apply_kernel(f, t, spec) - green_apply_sequential(f, t, spec)) <= 1e-7


def test_q_values_rejects_nonfinite():
    spec = ProblemSpec(FracOrders(1.0, 1.0), UNIT, q=lambda t: np.where(t == 0.5, np.inf, 1.0))
    with pytest.raises(DomainError):
        spec.q_values(np.array([0.25, 0.5]))
