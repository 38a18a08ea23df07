import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cigfkit import bounds as bd
from cigfkit.cigf import cigf
from cigfkit.distributions import make_family
from cigfkit.numerics import DomainError

FAMS = [("uniform", 0.0, 1.0), ("uniform", 0.0, 3.0), ("power", 2.0), ("power", 0.5),
        ("exponential", 1.0), ("erlang2", 1.0), ("bernoulli", 0.5),
        ("bernoulli", 0.2)]


@pytest.mark.parametrize("fam", FAMS, ids=str)
def test_all_bounds_hold(fam):
    rep = bd.verify_bounds(make_family(*fam))
    assert rep.checks
    assert rep.ok, [(c.name, c.params, c.margin) for c in rep.failures()]


def test_two_sided_unbounded_law_has_no_applicable_bounds():
    assert bd.verify_bounds(make_family("laplace", 1.0)).checks == []


def test_report_records_failures():
    rep = bd.BoundsReport("x")
    rep.add("fake", {}, value=2.0, bound=1.0, side="upper")
    rep.add("fine", {}, value=2.0, bound=1.0, side="lower")
    assert not rep.ok and [c.name for c in rep.failures()] == ["fake"]


@pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
@pytest.mark.parametrize("theta", [0.1, 0.5, 0.75])
def test_holder_equality_for_two_point_law(p, theta):
    X = make_family("bernoulli", p)
    assert abs(cigf(X, (theta, 1 - theta)).value - bd.holder_bound(X, theta)) <= 1e-12


def test_holder_strict_for_continuous_law():
    U = make_family("uniform", 0.0, 1.0)
    assert cigf(U, (0.5, 0.5)).value < bd.holder_bound(U, 0.5) - 0.1


def test_erlang_chernoff_infimum():
    X = make_family("erlang2", 1.0)
    b, s1, s2 = bd.chernoff_grid_infimum(X, (1, 1))
    a = bd.erlang_chernoff_infimum(1.0, 1.0)
    np.testing.assert_allclose(a, 27 / 4, rtol=1e-15)
    assert a <= b <= 1.2 * a
    assert s1 < 0 < s2


def test_exponential_chernoff_example():
    E = make_family("exponential", 1.0)
    b, side = bd.chernoff_bound(E, (1, 1), -0.25, 0.5)
    # g = 1/c with c = 0.25, M(s) = 1/(1-s)
    np.testing.assert_allclose(b, 4.0 * 0.8 * 2.0, rtol=1e-14)
    assert side == "upper" and b >= 0.5


def test_chernoff_lower_side():
    U = make_family("uniform", 0.0, 1.0)
    b, side = bd.chernoff_bound(U, (-0.25, -0.25), -0.5, 0.25)
    assert side == "lower" and cigf(U, (-0.25, -0.25)).value >= b


@pytest.mark.parametrize("args", [((1, 1), 0.5, 0.5), ((1, -1), -0.5, 0.5), ((1, 1), -0.5, 0.5), ((1, 1), -0.5, 1.5)])
def test_chernoff_rejections(args):
    with pytest.raises(DomainError):
        bd.chernoff_bound(make_family("exponential", 1.0), *args)


def test_mgf_radius():
    assert bd.mgf_radius(make_family("exponential", 3.0)) == 3.0
    assert bd.mgf_radius(make_family("laplace", 2.0)) == 0.5
    assert math.isinf(bd.mgf_radius(make_family("uniform", 0.0, 1.0)))


def test_bernoulli_bound_uniform_example():
    U = make_family("uniform", 0.0, 1.0)
    b, ok = bd.bernoulli_bounds(U, (1, 1), form="K")
    assert ok
    np.testing.assert_allclose(b, 0.5 - 1 / 3, rtol=1e-12)
    assert bd.bernoulli_bounds(U, (2, 2))[1] is False


def test_minkowski_requires_bounded_support():
    with pytest.raises(DomainError):
        bd.minkowski_bounds(make_family("exponential", 1.0), 2.0)
    with pytest.raises(DomainError):
        bd.minkowski_bounds(make_family("uniform", 0.0, 1.0), 0.5)


@given(st.floats(1.0, 6.0))
def test_minkowski_sandwich_uniform(gamma):
    mb = bd.minkowski_bounds(make_family("uniform", 0.0, 2.0), gamma)
    assert mb.K_lower - 1e-9 <= mb.K <= mb.K_upper + 1e-9
    assert mb.H_lower - 1e-9 <= mb.H <= mb.H_upper + 1e-9
    assert mb.G_diag <= min(mb.G_diag_upper_viaK, mb.G_diag_upper_viaH) + 1e-9


@given(a=st.floats(0.05, 3), b=st.floats(0.05, 3), s1=st.floats(-0.95, -0.01), s2=st.floats(0.01, 0.95))
def test_chernoff_property(a, b, s1, s2):
    assume(a * s1 + b * s2 > 1e-3)
    E = make_family("erlang2", 1.0)
    bnd, _ = bd.chernoff_bound(E, (a, b), s1, s2)
    assert cigf(E, (a, b)).value <= bnd * (1 + 1e-9)
