import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
import mpmath

from cigfkit.numerics import (
    DEFAULT_QUAD,
    AccuracyError,
    DomainError,
    FracDiffSpec,
    QuadSpec,
    Region,
    alternating_series,
    beta,
    caputo_deriv,
    central_diff,
    gen_binomial,
    incomplete_beta,
    integrate_1d,
    integrate_2d,
    log_gamma,
    upper_incomplete_gamma,
)


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (0.5, math.log(math.sqrt(math.pi))), (5.0, math.log(24.0))])
def test_log_gamma(x, expected):
    np.testing.assert_allclose(log_gamma(x), expected, atol=1e-14)


@pytest.mark.parametrize("x, y, expected", [(1, 1, 1.0), (2, 2, 1 / 6), (1.5, 0.5, math.pi / 2)])
def test_beta(x, y, expected):
    np.testing.assert_allclose(beta(x, y), expected, rtol=1e-14)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_special_function_domains(bad):
    with pytest.raises(DomainError):
        log_gamma(bad)
    with pytest.raises(DomainError):
        beta(bad, 1.0)


def test_incomplete_beta_examples():
    assert incomplete_beta(0.0, 2.0, 3.0) == 0.0
    np.testing.assert_allclose(incomplete_beta(1.0, 2.0, 3.0), beta(2.0, 3.0), rtol=1e-14)
    np.testing.assert_allclose(incomplete_beta(0.5, 1.0, 1.0), 0.5, rtol=1e-14)


def test_upper_incomplete_gamma_examples():
    np.testing.assert_allclose(upper_incomplete_gamma(1.0, 0.0), 1.0)
    np.testing.assert_allclose(upper_incomplete_gamma(1.0, 2.5), math.exp(-2.5), rtol=1e-14)
    np.testing.assert_allclose(upper_incomplete_gamma(2.0, 1.0), 2 * math.exp(-1), rtol=1e-14)


@pytest.mark.parametrize("a, n, expected", [(0.3, 0, 1.0), (3, 2, 3.0), (0.5, 2, -0.125), (2, 3, 0.0)])
def test_gen_binomial(a, n, expected):
    assert gen_binomial(a, n) == pytest.approx(expected, abs=1e-15)


@given(st.floats(0.05, 20), st.floats(0.05, 20))
def test_beta_symmetric(x, y):
    np.testing.assert_allclose(beta(x, y), beta(y, x), rtol=1e-13)


@given(st.floats(0.01, 0.99), st.floats(0.2, 6), st.floats(0.2, 6))
def test_incomplete_beta_complement(p, x, y):
    upper = float(mpmath.betainc(x, y, p, 1))
    np.testing.assert_allclose(incomplete_beta(p, x, y), beta(x, y) - upper, rtol=1e-9, atol=1e-13)


@given(st.floats(0.1, 30))
def test_upper_gamma_at_zero(a):
    np.testing.assert_allclose(upper_incomplete_gamma(a, 0.0), math.exp(log_gamma(a)), rtol=1e-13)


def test_integrate_1d_examples():
    v, _ = integrate_1d(lambda u: np.ones_like(u), 0.0, 1.0)
    np.testing.assert_allclose(v, 1.0, rtol=1e-14)
    v, _ = integrate_1d(lambda u: np.sqrt(u * (1 - u)), 0.0, 1.0)
    np.testing.assert_allclose(v, math.pi / 8, rtol=1e-10)
    v, e = integrate_1d(lambda x: np.exp(-x), 0.0, math.inf)
    np.testing.assert_allclose(v, 1.0, atol=1e-10)


@pytest.mark.parametrize("x", [0.25, 0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("y", [0.25, 0.5, 1.0, 2.0, 5.0])
def test_integrate_1d_singular_endpoints(x, y):
    # the distance to the upper limit is passed in exactly; 1 - u itself
    # cannot resolve a singularity at 1 in double precision
    v, _ = integrate_1d(lambda u, c: u ** (x - 1) * c ** (y - 1), 0.0, 1.0, complement=True)
    np.testing.assert_allclose(v, beta(x, y), rtol=DEFAULT_QUAD.rel_tol)


@pytest.mark.parametrize("x", [0.25, 0.5, 2.0])
def test_integrate_1d_left_singularity_plain(x):
    v, _ = integrate_1d(lambda u: u ** (x - 1) * (1 - u), 0.0, 1.0)
    np.testing.assert_allclose(v, beta(x, 2.0), rtol=DEFAULT_QUAD.rel_tol)


def test_integrate_1d_breakpoints_and_divergence():
    v, _ = integrate_1d(lambda x: np.abs(x - 0.3), 0.0, 1.0, points=[0.3])
    np.testing.assert_allclose(v, (0.3 ** 2 + 0.7 ** 2) / 2, rtol=1e-12)
    with pytest.raises((AccuracyError, DomainError)), np.errstate(over="ignore"):
        integrate_1d(lambda x: 1.0 / x, 0.0, 1.0)


def test_integrate_2d_examples():
    one = lambda x, y: np.ones_like(y)                    # noqa: E731
    v, _ = integrate_2d(one, Region.rectangle(0, 1, 0, 1))
    np.testing.assert_allclose(v, 1.0, rtol=1e-13)
    v, _ = integrate_2d(lambda x, y: 2 * np.ones_like(y), Region.simplex())
    np.testing.assert_allclose(v, 1.0, rtol=1e-12)
    v, _ = integrate_2d(lambda x, y: x * y, Region.rectangle(0, 1, 0, 1))
    np.testing.assert_allclose(v, 0.25, rtol=1e-13)


def test_alternating_series_examples():
    v, _, _ = alternating_series(lambda i: (-0.5) ** i)
    np.testing.assert_allclose(v, 2 / 3, rtol=1e-12)
    v, err, n = alternating_series(lambda i: 1.0 if i == 0 else 0.0)
    assert v == 1.0 and n <= 3


def test_alternating_series_budget():
    with pytest.raises(AccuracyError):
        alternating_series(lambda i: 1.0 / (i + 1), QuadSpec(series_terms_max=50))


def test_central_diff_examples():
    np.testing.assert_allclose(central_diff(np.exp, 0.0, 1, 1e-4), 1.0, atol=1e-8)
    np.testing.assert_allclose(central_diff(lambda x: x * x, 3.0, 1, 1e-3), 6.0, rtol=1e-10)
    np.testing.assert_allclose(central_diff(lambda x: x ** 3, 1.0, 2, 1e-3), 6.0, rtol=1e-7)


def test_central_diff_rate():
    errs = [abs(central_diff(np.sin, 0.7, 1, h) - math.cos(0.7)) for h in (1e-2, 5e-3)]
    np.testing.assert_allclose(errs[0] / errs[1], 4.0, rtol=0.05)


def test_caputo_examples():
    fd = FracDiffSpec(1.5)
    np.testing.assert_allclose(caputo_deriv(lambda t: math.exp(-t), 0.0, fd), 1.0, rtol=1e-6)
    assert abs(caputo_deriv(lambda t: 2.0, 0.0, FracDiffSpec(0.5))) < 1e-12


def test_caputo_near_integer_order():
    # the right-sided operator of order 1 is -d/dt, so the limit for e^{-t} at 0 is 1
    v = caputo_deriv(lambda t: math.exp(-t), 0.0, FracDiffSpec(0.999))
    np.testing.assert_allclose(v, -central_diff(lambda t: math.exp(-t), 0.0, 1, 1e-4), rtol=0.01)


def test_caputo_rejects_integer_order():
    with pytest.raises(DomainError):
        caputo_deriv(math.exp, 0.0, FracDiffSpec(2.0))


def test_quadspec_validation():
    with pytest.raises(DomainError):
        QuadSpec(tail_mass=0.1)
    with pytest.raises(DomainError):
        QuadSpec(abs_tol=0.0)
