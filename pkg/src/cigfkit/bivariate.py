"""Bivariate CIGF, joint cumulative entropies and their recovery.

``G(α, β) = ∬_S F^α F̄^β dx dy`` with ``S = {F·F̄ > 0}``.  Joint entropies
integrate over the support rectangle by default; ``region="S"`` restricts
them to ``S`` (the two differ when ``S`` is not a rectangle, e.g. the
triangle law, where ``F`` is positive but ``F̄`` vanishes off the triangle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import distributions as dist
from .cigf import MeasureReport, Membership, Method, ParamPair, cigf, in_domain
from .distributions import Distribution, EmpiricalDiscrete
from .entropy import ce, cre, default_step
from .numerics import (
    DEFAULT_QUAD,
    AccuracyError,
    DomainError,
    FracDiffSpec,
    QuadSpec,
    Region,
    beta,
    caputo_deriv,
    central_diff,
    integrate_2d,
)
from .reliability import MonteCarloConfig, run_streams

__all__ = [
    "BivariateDistribution",
    "cigf2",
    "cigf2_mc",
    "cigf2_product_check",
    "entropy_identity_check",
    "in_domain2",
    "joint_ce",
    "joint_ce_frac",
    "joint_ce_n",
    "joint_cre",
    "joint_cre_frac",
    "joint_cre_n",
    "joint_recovery_check",
    "make_bivariate",
    "odds2",
]


@dataclass
class BivariateDistribution:
    """Joint law given by vectorised ``cdf(x, y)`` and ``sf(x, y)``.

    ``region`` describes ``S``; ``box`` is the support rectangle
    ``(x0, x1, y0, y1)``.  ``kinks(x)`` returns inner breakpoints in ``y``
    for the rectangle integrals.
    """

    tag: tuple
    cdf: Callable[[np.ndarray, np.ndarray], np.ndarray]
    sf: Callable[[np.ndarray, np.ndarray], np.ndarray]
    region: Region
    box: tuple[float, float, float, float]
    marginals: tuple[Distribution, Distribution] | None = None
    pdf: Callable | None = None
    closed_form: Callable[[float, float], float] | None = None
    domain: Callable[[ParamPair], Membership] | None = None
    kinks: Callable[[float], tuple] | None = None
    x_points: tuple = ()
    meta: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        head, *rest = self.tag
        return head if not rest else f"{head}({', '.join(map(str, rest))})"

    def rectangle(self) -> Region:
        x0, x1, y0, y1 = self.box
        pts = self.kinks
        return Region(x0, x1, y0, y1, self.x_points,
                      (lambda x: pts(x)) if pts else None)


def _grid_law(xs, ys, pmf) -> tuple[Callable, Callable]:
    xs, ys, pmf = np.asarray(xs, float), np.asarray(ys, float), np.asarray(pmf, float)

    def cdf(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        ix = (xs[:, None] <= x.ravel()[None, :]).astype(float)
        iy = (ys[:, None] <= y.ravel()[None, :]).astype(float)
        return np.einsum("ij,in,jn->n", pmf, ix, iy).reshape(x.shape)

    def sf(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        ix = (xs[:, None] > x.ravel()[None, :]).astype(float)
        iy = (ys[:, None] > y.ravel()[None, :]).astype(float)
        return np.einsum("ij,in,jn->n", pmf, ix, iy).reshape(x.shape)

    return cdf, sf


def _fgm2x2(theta: float) -> BivariateDistribution:
    if not -0.25 < theta < 0.25:
        raise DomainError(f"θ must lie in (-1/4, 1/4), got {theta}")
    c, d = 0.25 + theta, 0.25 - theta
    cdf, sf = _grid_law([0.0, 1.0], [0.0, 1.0], [[c, d], [d, c]])
    b = dist.make_family("bernoulli", 0.5)
    return BivariateDistribution(
        ("fgm2x2", theta), cdf, sf, Region.rectangle(0.0, 1.0, 0.0, 1.0), (0.0, 1.0, 0.0, 1.0),
        (b, b), closed_form=lambda a, bb: c ** (a + bb),
        domain=lambda p: Membership.INSIDE)


def _triangle() -> BivariateDistribution:
    def cdf(x, y):
        x = np.clip(np.asarray(x, float), 0.0, 1.0)
        y = np.clip(np.asarray(y, float), 0.0, 1.0)
        inside = x + y <= 1.0
        return np.where(inside, 2 * x * y, 1.0 - (1 - x) ** 2 - (1 - y) ** 2)

    def sf(x, y):
        x = np.maximum(np.asarray(x, float), 0.0)
        y = np.maximum(np.asarray(y, float), 0.0)
        s = np.maximum(1.0 - x - y, 0.0)
        return s * s

    def closed(a, b):
        return 2.0 ** a * beta(a + 1, 2 * b + 1) * beta(a + 1, a + 2 * b + 2)

    def domain(p):
        return Membership.INSIDE if p.alpha > -1 and p.beta > -0.5 else Membership.OUTSIDE

    m = dist.affine(dist.make_family("power", 2.0), -1.0, 1.0)
    return BivariateDistribution(
        ("triangle_uniform",), cdf, sf, Region.simplex(1.0), (0.0, 1.0, 0.0, 1.0), (m, m),
        pdf=lambda x, y: np.where((x >= 0) & (y >= 0) & (x + y <= 1), 2.0, 0.0),
        closed_form=closed, domain=domain,
        kinks=lambda x: (1.0 - x,) if 0 < x < 1 else ())


def _sum_density() -> BivariateDistribution:
    def cdf(x, y):
        x = np.clip(np.asarray(x, float), 0.0, 1.0)
        y = np.clip(np.asarray(y, float), 0.0, 1.0)
        return 0.5 * x * y * (x + y)

    def sf(x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        xc, yc = np.maximum(x, 0.0), np.maximum(y, 0.0)
        v = 0.5 * (1 - xc) * (1 - yc) * (xc + yc + 2)
        return np.where((x < 1) & (y < 1), v, 0.0)

    return BivariateDistribution(
        ("sum_density",), cdf, sf, Region.rectangle(0.0, 1.0, 0.0, 1.0), (0.0, 1.0, 0.0, 1.0),
        None, pdf=lambda x, y: np.where((0 <= x) & (x <= 1) & (0 <= y) & (y <= 1), x + y, 0.0),
        domain=lambda p: Membership.UNDETERMINED)


def _atoms(X: Distribution) -> tuple:
    return tuple(float(v) for v in X.points) if isinstance(X, EmpiricalDiscrete) else ()


def _product(X: Distribution, Y: Distribution) -> BivariateDistribution:
    if X.is_degenerate or Y.is_degenerate:
        raise DomainError("bivariate CIGF needs nondegenerate components")

    def cdf(x, y):
        return np.asarray(X.cdf(x), float) * np.asarray(Y.cdf(y), float)

    def sf(x, y):
        return np.asarray(X.sf(x), float) * np.asarray(Y.sf(y), float)

    def domain(p):
        a, b = in_domain(X, p), in_domain(Y, p)
        if Membership.OUTSIDE in (a, b):
            return Membership.OUTSIDE
        if a is b is Membership.INSIDE:
            return Membership.INSIDE
        return Membership.UNDETERMINED

    sx, sy = X.support, Y.support
    ya = _atoms(Y)
    return BivariateDistribution(
        ("product", X.name, Y.name), cdf, sf,
        Region(sx.l, sx.r, sy.l, sy.r, _atoms(X), (lambda x: ya) if ya else None),
        (sx.l, sx.r, sy.l, sy.r), (X, Y), domain=domain,
        kinks=(lambda x: ya) if ya else None, x_points=_atoms(X))


def make_bivariate(example: str, *args) -> BivariateDistribution:
    """``fgm2x2(θ)``, ``triangle_uniform``, ``sum_density`` or ``product(X, Y)``."""
    if example == "fgm2x2":
        return _fgm2x2(float(args[0]) if args else 0.0)
    if example == "triangle_uniform":
        return _triangle()
    if example == "sum_density":
        return _sum_density()
    if example == "product":
        if len(args) != 2:
            raise DomainError("product needs two distributions")
        return _product(*args)
    raise DomainError(f"unknown bivariate example {example!r}")


# ---------------------------------------------------------------------------
# CIGF
# ---------------------------------------------------------------------------


def in_domain2(V: BivariateDistribution, p) -> Membership:
    p = ParamPair.coerce(p)
    return V.domain(p) if V.domain else Membership.UNDETERMINED


def _integrate(V: BivariateDistribution, psi: Callable, region: Region, spec: QuadSpec
               ) -> tuple[float, float]:
    """∬ psi(F, F̄) over ``region``, with the integrand set to 0 off ``S``."""
    def f(x, y):
        F = V.cdf(np.full_like(y, x), y)
        S = V.sf(np.full_like(y, x), y)
        with np.errstate(all="ignore"):
            out = psi(F, S)
        return np.where((F > 0) & (S > 0), out, 0.0)

    with np.errstate(all="ignore"):
        return integrate_2d(f, region, spec)


def cigf2(V: BivariateDistribution, p, spec: QuadSpec = DEFAULT_QUAD, *,
          method: str = "auto") -> MeasureReport:
    """Bivariate CIGF; closed form where one exists, 2D quadrature otherwise."""
    p = ParamPair.coerce(p)
    a, b = p.alpha, p.beta
    mem = in_domain2(V, p)
    if mem is Membership.OUTSIDE:
        raise DomainError(f"({a}, {b}) lies outside D of {V.name}")
    if method not in ("auto", "closed_form", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    if method != "quadrature" and V.closed_form is not None:
        return MeasureReport(float(V.closed_form(a, b)), 0.0, Method.CLOSED_FORM, {"law": V.name})
    if method == "closed_form":
        raise DomainError(f"no closed form for {V.name}")
    try:
        v, e = _integrate(V, lambda F, S: np.power(F, a) * np.power(S, b), V.region, spec)
    except (AccuracyError, DomainError) as exc:
        if mem is Membership.INSIDE:
            raise AccuracyError(f"2D quadrature failed for {V.name} at ({a}, {b})") from exc
        raise DomainError(f"({a}, {b}) appears to diverge for {V.name}") from exc
    if not math.isfinite(v):
        raise DomainError(f"({a}, {b}) appears to diverge for {V.name}")
    return MeasureReport(v, e, Method.QUADRATURE, {"law": V.name})


def cigf2_mc(V: BivariateDistribution, p, mc: MonteCarloConfig) -> MeasureReport:
    """Uniform-sampling Monte Carlo of the masked integrand over the (finite) box."""
    p = ParamPair.coerce(p)
    x0, x1, y0, y1 = V.box
    area = (x1 - x0) * (y1 - y0)
    if not math.isfinite(area):
        raise DomainError("Monte Carlo over the box needs a bounded support")

    def work(rng, m):
        x = rng.uniform(x0, x1, m)
        y = rng.uniform(y0, y1, m)
        F, S = V.cdf(x, y), V.sf(x, y)
        with np.errstate(all="ignore"):
            v = np.where((F > 0) & (S > 0), np.power(F, p.alpha) * np.power(S, p.beta), 0.0) * area
        return np.array([v.sum(), (v ** 2).sum()])

    s, s2 = np.sum(run_streams(mc, work), axis=0)
    N = mc.n_trials
    mean = s / N
    sd = math.sqrt(max(s2 / N - mean ** 2, 0.0) / max(N - 1, 1))
    return MeasureReport(mean, 3 * sd, Method.MONTE_CARLO, {"n_trials": N, "seed": mc.seed})


def cigf2_product_check(X: Distribution, Y: Distribution, p, spec: QuadSpec = DEFAULT_QUAD
                        ) -> tuple[MeasureReport, MeasureReport]:
    """(2D quadrature of the independent coupling, ``G_X · G_Y``)."""
    p = ParamPair.coerce(p)
    gx, gy = cigf(X, p, spec), cigf(Y, p, spec)
    prod = MeasureReport(gx.value * gy.value,
                         abs(gx.value) * gy.err_est + abs(gy.value) * gx.err_est,
                         gx.method, {"factors": (gx.value, gy.value)})
    if X.is_degenerate or Y.is_degenerate:
        return MeasureReport(0.0, 0.0, Method.CLOSED_FORM, {"degenerate": True}), prod
    return cigf2(make_bivariate("product", X, Y), p, spec, method="quadrature"), prod


def odds2(V: BivariateDistribution, b: float, spec: QuadSpec = DEFAULT_QUAD) -> MeasureReport:
    """``∬_S (F̄/F)^β``, i.e. ``G(-β, β)``."""
    return cigf2(V, (-b, b), spec)


# ---------------------------------------------------------------------------
# joint entropies
# ---------------------------------------------------------------------------


def _log_power(nu: float):
    def psi(P):
        with np.errstate(all="ignore"):
            L = -np.log(P)
            return np.where((P > 0) & (P < 1), P * np.power(L, nu), 0.0)
    return psi


def _joint(V: BivariateDistribution, nu: float, residual: bool, spec: QuadSpec,
           region: str, label: str) -> MeasureReport:
    if region not in ("rect", "S"):
        raise DomainError(f"region must be 'rect' or 'S', got {region!r}")
    psi = _log_power(nu)
    pick = (lambda F, S: psi(S)) if residual else (lambda F, S: psi(F))

    def f(x, y):
        xs = np.full_like(y, x)
        F, S = V.cdf(xs, y), V.sf(xs, y)
        keep = (F > 0) & (S > 0) if region == "S" else np.ones_like(F, bool)
        return np.where(keep, pick(F, S), 0.0)

    dom = V.region if region == "S" else V.rectangle()
    try:
        with np.errstate(all="ignore"):
            v, e = integrate_2d(f, dom, spec)
    except (AccuracyError, DomainError) as exc:
        raise DomainError(f"{label} of {V.name} diverges or cannot be resolved") from exc
    if not math.isfinite(v):
        raise DomainError(f"{label} of {V.name} diverges")
    norm = math.gamma(nu + 1.0)
    return MeasureReport(v / norm, e / norm, Method.QUADRATURE, {"order": nu, "region": region})


def joint_cre(V, spec: QuadSpec = DEFAULT_QUAD, region: str = "rect") -> MeasureReport:
    """``-∬ F̄ log F̄``."""
    return _joint(V, 1.0, True, spec, region, "joint CRE")


def joint_ce(V, spec: QuadSpec = DEFAULT_QUAD, region: str = "rect") -> MeasureReport:
    """``-∬ F log F``."""
    return _joint(V, 1.0, False, spec, region, "joint CE")


def joint_cre_n(V, n: int, spec: QuadSpec = DEFAULT_QUAD, region: str = "rect") -> MeasureReport:
    if int(n) != n or n < 0:
        raise DomainError(f"n must be an integer >= 0, got {n}")
    return _joint(V, float(n), True, spec, region, f"joint CRE_{n}")


def joint_ce_n(V, n: int, spec: QuadSpec = DEFAULT_QUAD, region: str = "rect") -> MeasureReport:
    if int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n}")
    return _joint(V, float(n), False, spec, region, f"joint CE_{n}")


def joint_cre_frac(V, nu: float, spec: QuadSpec = DEFAULT_QUAD, region: str = "rect") -> MeasureReport:
    if not nu >= 0:
        raise DomainError(f"ν must be >= 0, got {nu}")
    return _joint(V, float(nu), True, spec, region, f"joint CRE_{nu}")


def joint_ce_frac(V, nu: float, spec: QuadSpec = DEFAULT_QUAD, region: str = "rect") -> MeasureReport:
    if not nu > 0:
        raise DomainError(f"ν must be > 0, got {nu}")
    return _joint(V, float(nu), False, spec, region, f"joint CE_{nu}")


def entropy_identity_check(V: BivariateDistribution, which: str, spec: QuadSpec = DEFAULT_QUAD
                           ) -> tuple[float, float]:
    """(joint measure, right-hand side of the independence identity).

    ``which="ce"``: ``[r2 - E Y] CE(X) + [r1 - E X] CE(Y)`` (finite ``r``);
    ``which="cre"``: ``E Y · CRE(X) + E X · CRE(Y)``.
    """
    if V.marginals is None:
        raise DomainError(f"marginals of {V.name} are not available")
    X, Y = V.marginals
    if X.support.l != 0 or Y.support.l != 0:
        raise DomainError("the identities need supports starting at 0")
    ex, ey = X.mean, Y.mean
    if which == "ce":
        r1, r2 = X.support.r, Y.support.r
        if not (math.isfinite(r1) and math.isfinite(r2)):
            raise DomainError("the CE identity needs a bounded support")
        rhs = (r2 - ey) * ce(X, spec).value + (r1 - ex) * ce(Y, spec).value
        return joint_ce(V, spec).value, rhs
    if which == "cre":
        rhs = ey * cre(X, spec).value + ex * cre(Y, spec).value
        return joint_cre(V, spec).value, rhs
    raise DomainError(f"which must be 'cre' or 'ce', got {which!r}")


# ---------------------------------------------------------------------------
# recovery
# ---------------------------------------------------------------------------


def joint_recovery_check(V: BivariateDistribution, which: str, order: float = 1,
                         spec: QuadSpec = DEFAULT_QUAD, fd: FracDiffSpec | None = None
                         ) -> tuple[MeasureReport, MeasureReport]:
    """(direct over ``S``, recovered from slices of ``cigf2``).

    Integer orders use central differences with the univariate step rule;
    non-integer orders the right-sided Caputo derivative.
    """
    if which not in ("cre", "ce"):
        raise DomainError(f"which must be 'cre' or 'ce', got {which!r}")
    residual = which == "cre"
    point = (lambda t: ParamPair(0.0, t)) if residual else (lambda t: ParamPair(t, 0.0))
    g = lambda t: cigf2(V, point(t), spec).value                 # noqa: E731
    integer = float(order).is_integer()
    if integer:
        n = int(order)
        if not 1 <= n <= 4:
            raise DomainError(f"derivative recovery supports orders 1-4, got {n}")
        h, rich = default_step(n)
        reach = (1 if n <= 2 else 2) * h
    else:
        fd = fd or FracDiffSpec(float(order))
        h = fd.step()
        reach = 2 * h
    for t in (1.0 - reach, 1.0, 1.0 + reach):
        if in_domain2(V, point(t)) is Membership.OUTSIDE:
            raise DomainError(f"stencil around {point(1.0)} leaves D of {V.name}")
    direct = (_joint(V, float(order), residual, spec, "S", f"joint {which}"))
    try:
        if integer:
            d = central_diff(g, 1.0, n, h, richardson=rich)
            d2 = central_diff(g, 1.0, n, 2 * h, richardson=rich)
            coef = (-1) ** n / math.factorial(n)
            rec = MeasureReport(coef * d, abs(coef * (d - d2)), Method.QUADRATURE,
                                {"recovery": "central_diff", "step": h})
        else:
            d = caputo_deriv(g, 1.0, fd, spec)
            v = d / math.gamma(order + 1.0)
            rec = MeasureReport(v, 1e-6 * (1 + abs(v)), Method.QUADRATURE,
                                {"recovery": "caputo", "step": h})
    except (AccuracyError, DomainError) as exc:
        raise DomainError(f"slice {point(1.0)} of the CIGF of {V.name} is not "
                          f"differentiable here") from exc
    return direct, rec
