import math
import warnings

import mpmath
import numpy as np
import pytest

from fraclyap.domain import FracOrders, Interval
from fraclyap.errors import DomainError
from fraclyap.fracops import (
    Anchor,
    PowerFunction,
    caputo_derivative_right,
    chebyshev_points,
    composition_residuals,
    rl_derivative_left,
    rl_integral_left,
    rl_integral_right,
)
from fraclyap.verify import left_family, right_family

INV_GAMMA_15 = 1.1283791670955126  # 1 / Gamma(1.5)
INV_GAMMA_05 = 0.5641895835477563  # 1 / Gamma(0.5)
GAMMA2_OVER_GAMMA25 = 0.752252778063675


def one(t):
    return np.ones_like(np.asarray(t, dtype=float))


def test_half_integral_of_one():
    # I^{1/2} 1 (t) = t^{1/2} / Gamma(3/2)
    assert rl_integral_left(one, 0.5, 1.0, 0.0) == pytest.approx(INV_GAMMA_15, rel=1e-12)
    assert rl_integral_right(one, 0.5, 0.0, 1.0) == pytest.approx(INV_GAMMA_15, rel=1e-12)


def test_half_integral_of_linear():
    # I^{1/2} t (1) = Gamma(2)/Gamma(2.5)
    val = rl_integral_left(lambda s: s, 0.5, 1.0, 0.0)
    assert val == pytest.approx(GAMMA2_OVER_GAMMA25, rel=1e-12)


def test_integral_vanishes_at_anchor_and_vectorizes():
    t = np.array([0.0, 0.25, 1.0])
    out = rl_integral_left(one, 0.3, t, 0.0)
    assert out.shape == (3,) and out[0] == 0.0
    np.testing.assert_allclose(out[1:], t[1:] ** 0.3 / math.gamma(1.3), rtol=1e-12)


def test_order_one_is_plain_integral():
    assert rl_integral_left(np.cos, 1.0, 1.2, 0.2) == pytest.approx(math.sin(1.2) - math.sin(0.2), rel=1e-13)


def test_half_derivative_of_one():
    # D^{1/2} 1 = t^{-1/2} / Gamma(1/2)
    assert rl_derivative_left(one, 0.5, 1.0, 0.0) == pytest.approx(INV_GAMMA_05, rel=1e-9)


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("p", [0.3, 0.7])
def test_power_rules_against_mpmath(mu, p):
    f = PowerFunction(Anchor.LEFT, 0.2, mu)
    t = 0.9
    ref = float(mpmath.gamma(mu + 1) / mpmath.gamma(mu + p + 1) * mpmath.mpf(0.7) ** (mu + p))
    assert rl_integral_left(f, p, t, 0.2) == pytest.approx(ref, rel=1e-12)
    assert f.integral(p)(t) == pytest.approx(ref, rel=1e-13)
    dref = float(mpmath.gamma(mu + 1) / mpmath.gamma(mu - p + 1) * mpmath.mpf(0.7) ** (mu - p))
    assert rl_derivative_left(f, p, t, 0.2) == pytest.approx(dref, rel=1e-8)


def test_derivative_annihilates_kernel_power():
    f = PowerFunction(Anchor.LEFT, 0.0, -0.4)
    assert f.rl_derivative(0.6).coef == 0.0
    assert abs(rl_derivative_left(f, 0.6, 0.5, 0.0)) < 1e-8


def test_right_integral_of_right_power():
    f = PowerFunction(Anchor.RIGHT, 1.0, 1.0)
    expect = f.integral(0.4)
    t = np.array([0.1, 0.5, 0.9])
    np.testing.assert_allclose(rl_integral_right(f, 0.4, t, 1.0), expect(t), rtol=1e-12)


def test_caputo_right_of_order_one_is_minus_derivative():
    assert caputo_derivative_right(np.cos, 1.0, 0.3, 1.0) == pytest.approx(-math.cos(0.3))


def test_caputo_right_of_constant_is_zero():
    zero = lambda s: np.zeros_like(np.asarray(s, dtype=float))  # noqa: E731
    assert caputo_derivative_right(zero, 0.6, 0.2, 1.0) == 0.0


def test_caputo_right_of_linear():
    # f = 1 - t on [0, 1]: CD_{1-}^p f = (1-t)^{1-p} / Gamma(2-p)
    p = 0.35
    val = caputo_derivative_right(lambda s: -np.ones_like(s), p, 0.4, 1.0)
    assert val == pytest.approx(0.6 ** (1 - p) / math.gamma(2 - p), rel=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        rl_integral_left(one, 0.5, -0.1, 0.0)
    with pytest.raises(DomainError):
        rl_integral_right(one, 0.5, 1.1, 1.0)
    with pytest.raises(DomainError):
        rl_integral_left(one, 1.5, 0.5, 0.0)
    with pytest.raises(DomainError):
        PowerFunction(Anchor.LEFT, 0.0, -1.0)


def test_step_underflow_is_flagged():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        val = rl_derivative_left(one, 0.5, np.nextafter(1.0, 2.0), 1.0)
    assert math.isnan(val)
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)


def test_tiny_distance_from_zero_anchor_still_resolves():
    # subnormal spacing keeps the relative step alive when a = 0
    val = rl_derivative_left(one, 0.5, 1e-300, 0.0)
    assert val == pytest.approx(INV_GAMMA_05 * 1e150, rel=1e-6)


def test_chebyshev_points():
    pts = chebyshev_points(0.0, 2.0)
    assert pts.size == 17 and pts[8] == 1.0
    assert np.all(np.diff(pts) > 0) and pts[0] > 0.0 and pts[-1] < 2.0


@pytest.mark.parametrize("p", [0.3, 0.55, 1.0])
def test_left_composition(p):
    iv = Interval(0.0, 1.0)
    assert max(composition_residuals(p, left_family(p, 0.0), iv, "left")) <= 1e-7


@pytest.mark.parametrize("p", [0.3, 0.8])
def test_right_composition_on_shifted_interval(p):
    iv = Interval(-1.0, 2.0)
    assert max(composition_residuals(p, right_family(iv), iv, "right")) <= 1e-7


def test_composition_bad_identity():
    with pytest.raises(DomainError):
        composition_residuals(0.5, [one], Interval(0.0, 1.0), "middle")


def test_orders_invariants():
    assert FracOrders(0.6, 0.8).total == pytest.approx(1.4)
    for alpha, beta in [(0.5, 0.5), (0.2, 0.5), (1.2, 0.5), (0.0, 1.0)]:
        with pytest.raises(DomainError):
            FracOrders(alpha, beta)
    with pytest.raises(DomainError, match="alpha\\+beta must exceed 1"):
        FracOrders(0.4, 0.6)
    with pytest.raises(DomainError):
        Interval(1.0, 1.0)
