import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from cigfkit import bivariate as bv
from cigfkit.cigf import Membership, Method
from cigfkit.distributions import make_family
from cigfkit.numerics import DomainError
from cigfkit.reliability import MonteCarloConfig

GRID = [(a, b) for a in (0.5, 1.0, 2.0) for b in (0.5, 1.0, 2.0)]
U, E = make_family("uniform", 0.0, 1.0), make_family("exponential", 1.0)
TRI = bv.make_bivariate("triangle_uniform")


def _dblquad(f, x0, x1, y0, y1):
    v, _ = integrate.dblquad(lambda y, x: f(x, y), x0, x1, y0, y1, epsabs=1e-13, epsrel=1e-11)
    return v


@pytest.mark.parametrize("theta", [-0.2, 0.0, 0.1, 0.24])
@pytest.mark.parametrize("p", GRID, ids=str)
def test_fgm_closed_form(theta, p):
    V = bv.make_bivariate("fgm2x2", theta)
    c = 0.25 + theta
    np.testing.assert_allclose(bv.cigf2(V, p).value, c ** (p[0] + p[1]), rtol=1e-14)
    np.testing.assert_allclose(bv.cigf2(V, p, method="quadrature").value, c ** (p[0] + p[1]), rtol=1e-8)


@pytest.mark.parametrize("theta", [-0.25, 0.3])
def test_fgm_parameter_range(theta):
    with pytest.raises(DomainError):
        bv.make_bivariate("fgm2x2", theta)


@pytest.mark.parametrize("p", GRID, ids=str)
def test_triangle_closed_form_against_dblquad(p):
    a, b = p
    oracle = _dblquad(lambda x, y: (2 * x * y) ** a * (1 - x - y) ** (2 * b), 0, 1, 0, lambda x: 1 - x)
    np.testing.assert_allclose(bv.cigf2(TRI, p).value, oracle, rtol=1e-8)
    np.testing.assert_allclose(bv.cigf2(TRI, p, method="quadrature").value, oracle, rtol=1e-8)


def test_triangle_example_value():
    np.testing.assert_allclose(bv.cigf2(TRI, (1, 1)).value, 1 / 180, rtol=1e-14)


def test_triangle_odds():
    with pytest.raises(DomainError):
        bv.odds2(TRI, 1.0)
    closed = bv.odds2(TRI, 0.5).value
    quad = bv.cigf2(TRI, (-0.5, 0.5), method="quadrature").value
    np.testing.assert_allclose([closed, quad], 1.1107207345, rtol=1e-9)


def test_triangle_marginals():
    X, Y = TRI.marginals
    x = np.linspace(0, 1, 11)
    np.testing.assert_allclose(X.cdf(x), 1 - (1 - x) ** 2, atol=1e-15)
    np.testing.assert_allclose(TRI.cdf(x, np.ones_like(x)), X.cdf(x), atol=1e-15)


def _sum_F(x, y):
    return (x * x * y + x * y * y) / 2


def _sum_S(x, y):
    return ((1 - x) * (1 - y * y) + (1 - y) * (1 - x * x)) / 2


@pytest.mark.parametrize("p", [(1, 1), (0.5, 2), (2, 0.5)], ids=str)
def test_sum_density_against_dblquad(p):
    V = bv.make_bivariate("sum_density")
    a, b = p
    oracle = _dblquad(lambda x, y: _sum_F(x, y) ** a * _sum_S(x, y) ** b, 0, 1, 0, 1)
    np.testing.assert_allclose(bv.cigf2(V, p).value, oracle, rtol=1e-8)


def test_sum_density_monte_carlo():
    V = bv.make_bivariate("sum_density")
    m = bv.cigf2_mc(V, (1, 1), MonteCarloConfig(400_000, seed=5))
    assert m.method is Method.MONTE_CARLO
    assert abs(m.value - 0.0215277778) <= m.err_est


def test_sum_density_domain_undetermined_and_divergence():
    V = bv.make_bivariate("sum_density")
    assert bv.in_domain2(V, (1, 1)) is Membership.UNDETERMINED
    with pytest.raises(DomainError):
        bv.cigf2(V, (-1.5, -1.5))


@pytest.mark.parametrize("X,Y", [(U, U), (E, U), (make_family("power", 2.0), make_family("exponential", 2.0))],
                         ids=lambda d: d.name)
@pytest.mark.parametrize("p", [(0.5, 1.0), (1.0, 1.0), (2.0, 0.5)], ids=str)
def test_product_law(X, Y, p):
    joint, prod = bv.cigf2_product_check(X, Y, p)
    np.testing.assert_allclose(joint.value, prod.value, rtol=1e-7)


def test_product_rejects_degenerate():
    with pytest.raises(DomainError):
        bv.make_bivariate("product", U, make_family("degenerate", 1.0))


def test_product_domain_follows_marginals():
    V = bv.make_bivariate("product", E, U)
    assert bv.in_domain2(V, (1.0, 1.0)) is Membership.INSIDE
    assert bv.in_domain2(V, (1.0, 0.0)) is Membership.OUTSIDE


def test_unknown_example():
    with pytest.raises(DomainError):
        bv.make_bivariate("gumbel")


@pytest.mark.parametrize("X,Y,which", [(U, U, "ce"), (U, U, "cre"), (E, E, "cre"), (E, U, "cre"),
                                       (make_family("power", 2.0), U, "ce")])
def test_independence_identities(X, Y, which):
    j, rhs = bv.entropy_identity_check(bv.make_bivariate("product", X, Y), which)
    assert abs(j - rhs) <= 1e-7


def test_independence_identity_values():
    V = bv.make_bivariate("product", U, U)
    np.testing.assert_allclose(bv.entropy_identity_check(V, "ce")[0], 0.25, rtol=1e-9)
    W = bv.make_bivariate("product", E, E)
    np.testing.assert_allclose(bv.entropy_identity_check(W, "cre")[0], 2.0, rtol=1e-9)


@pytest.mark.parametrize("which", ["ce", "cre"])
def test_identities_fail_for_dependent_pair(which):
    j, rhs = bv.entropy_identity_check(bv.make_bivariate("fgm2x2", 0.1), which)
    assert abs(j - rhs) > 0.01


def test_identity_requires_bounded_support_for_ce():
    with pytest.raises(DomainError):
        bv.entropy_identity_check(bv.make_bivariate("product", E, U), "ce")


def test_triangle_region_choice():
    rect = bv.joint_ce(TRI).value
    s = bv.joint_ce(TRI, region="S").value
    np.testing.assert_allclose([rect, s], [0.23932, 0.122793], rtol=1e-4)


@pytest.mark.parametrize("V,which", [(bv.make_bivariate("fgm2x2", 0.1), "cre"),
                                     (bv.make_bivariate("fgm2x2", 0.1), "ce"),
                                     (TRI, "ce"), (TRI, "cre"),
                                     (bv.make_bivariate("product", U, U), "ce")],
                         ids=lambda v: getattr(v, "name", v))
def test_joint_recovery(V, which):
    d, r = bv.joint_recovery_check(V, which)
    assert abs(d.value - r.value) <= 1e-4


def test_joint_recovery_second_order():
    V = bv.make_bivariate("product", U, U)
    d, r = bv.joint_recovery_check(V, "cre", 2)
    np.testing.assert_allclose(d.value, bv.joint_cre_n(V, 2, region="S").value, rtol=1e-12)
    assert abs(d.value - r.value) <= 1e-4


def test_joint_recovery_fractional():
    V = bv.make_bivariate("product", U, U)
    d, r = bv.joint_recovery_check(V, "cre", 0.5)
    assert abs(d.value - r.value) <= 1e-3


def test_joint_integer_and_fractional_agree():
    V = bv.make_bivariate("product", U, U)
    np.testing.assert_allclose(bv.joint_cre_n(V, 2).value, bv.joint_cre_frac(V, 2.0).value, rtol=1e-12)
    np.testing.assert_allclose(bv.joint_ce_n(V, 1).value, bv.joint_ce(V).value, rtol=1e-12)


@settings(max_examples=15)
@given(a=st.floats(0.2, 3.0), b=st.floats(0.2, 3.0))
def test_fgm_independent_case_factorises(a, b):
    V = bv.make_bivariate("fgm2x2", 0.0)
    B = make_family("bernoulli", 0.5)
    from cigfkit.cigf import cigf
    # c^{a+b} with c = 1/4 equals the product of the marginal values 2^{-a-b}
    np.testing.assert_allclose(bv.cigf2(V, (a, b)).value,
                               cigf(B, (a, b)).value ** 2, rtol=1e-12)
    assert math.isfinite(bv.cigf2(V, (-a, -b)).value)
