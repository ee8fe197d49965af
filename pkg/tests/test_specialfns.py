import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fraclyap.errors import ConvergenceError, DomainError, NonFiniteIntegrandError
from fraclyap.specialfns import RuleKind, de_integrate, gamma_fn, gauss_legendre

# 2 ln((sqrt(0.75) + sqrt(0.5)) / sqrt(0.25)), checked with mpmath at 40 digits
SINGULAR_PAIR = 2.2924316695611777


def test_gamma_known_values():
    assert gamma_fn(0.75) == pytest.approx(1.2254167024651776, rel=1e-14)
    assert gamma_fn(1.5) == pytest.approx(0.886226925452758, rel=1e-14)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_gamma_integers_are_exact():
    for k in range(1, 12):
        assert gamma_fn(float(k)) == float(math.factorial(k - 1))


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=5.0))
def test_gamma_matches_mpmath(x):
    ref = float(mpmath.gamma(mpmath.mpf(x)))
    assert abs(gamma_fn(x) - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("bad", [0.0, -1.0, -2.5, math.nan, math.inf])
def test_gamma_rejects_nonpositive(bad):
    with pytest.raises(DomainError):
        gamma_fn(bad)


@pytest.mark.parametrize("n", range(1, 13))
def test_gauss_legendre_exact_to_degree_2n_minus_1(n):
    a, b = -0.3, 1.7
    rule = gauss_legendre(n, a, b)
    for k in range(2 * n):
        exact = (b ** (k + 1) - a ** (k + 1)) / (k + 1)
        assert rule.integrate(lambda x: x**k) == pytest.approx(exact, rel=1e-13, abs=1e-14)


def test_gauss_legendre_rule_is_sorted_positive_and_readonly():
    rule = gauss_legendre(20, 0.0, 2.0)
    assert rule.kind is RuleKind.SMOOTH
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    assert rule.weights.sum() == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(ValueError):
        rule.nodes[0] = 1.0


@pytest.mark.parametrize("n,a,b", [(0, 0, 1), (3, 1, 1), (3, 2, 1), (2.5, 0, 1)])
def test_gauss_legendre_bad_args(n, a, b):
    with pytest.raises(DomainError):
        gauss_legendre(n, a, b)


def test_de_endpoint_singularity():
    assert de_integrate(lambda s: s**-0.5, 0.0, 1.0) == pytest.approx(2.0, abs=1e-12)
    assert de_integrate(lambda s: np.ones_like(s), 0.0, 1.0) == pytest.approx(1.0, abs=1e-14)


def test_de_singular_pair_with_distances():
    def f(s, left, right):
        return (0.25 + right) ** -0.5 * right**-0.5

    assert abs(de_integrate(f, 0.0, 0.5, distances=True) - SINGULAR_PAIR) <= 1e-9


def test_de_batched_integrands():
    mus = np.array([-0.5, 0.0, 1.5])
    vals = de_integrate(lambda x: x[None, :] ** mus[:, None], 0.0, 1.0)
    np.testing.assert_allclose(vals, 1.0 / (mus + 1.0), rtol=1e-12)


def test_de_full_output_and_convergence_failure():
    value, info = de_integrate(np.cos, 0.0, 1.0, full_output=True)
    assert info.converged and value == pytest.approx(math.sin(1.0), abs=1e-13)
    with pytest.raises(ConvergenceError):
        de_integrate(lambda x: np.sin(1.0 / x) / x, 0.0, 1.0, max_level=4)


def test_de_rejects_interior_nan_and_tiny_tol():
    with pytest.raises(NonFiniteIntegrandError):
        de_integrate(lambda x: np.where(np.abs(x - 0.5) < 0.2, np.nan, 1.0), 0.0, 1.0)
    with pytest.raises(DomainError):
        de_integrate(np.cos, 0.0, 1.0, tol=1e-16)
