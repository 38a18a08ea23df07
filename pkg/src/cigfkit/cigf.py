"""Cumulative information generating function ``G_X(α, β) = ∫ F^α F̄^β dx``.

Closed forms are used for the named families; everything else is integrated
numerically.  When a density is available the integral is taken in the
probability scale, ``∫_0^1 u^α (1-u)^β / f(F^{-1}(u)) du``, split at the
median with the upper half written in ``v = 1 - u`` so that both singular
ends sit at zero and neither tail is truncated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import distributions as dist
from .distributions import Distribution, EmpiricalDiscrete
from .numerics import (
    DEFAULT_QUAD,
    AccuracyError,
    DomainError,
    QuadSpec,
    alternating_series,
    beta,
    gen_binomial,
    incomplete_beta,
    integrate_1d,
    log_upper_incomplete_gamma,
)

__all__ = [
    "Membership",
    "MeasureReport",
    "Method",
    "ParamPair",
    "cigf",
    "cigf_affine_check",
    "cigf_beta_representation",
    "cigf_equilibrium_series",
    "cigf_erlang_series",
    "cigf_odds",
    "closed_form",
    "golomb_ig",
    "h_measure",
    "in_domain",
    "integrate_functional",
    "k_measure",
    "laplace_cigf_as_printed",
]

_EPS = np.finfo(float).eps


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    SERIES = "series"
    MONTE_CARLO = "monte_carlo"


class Membership(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ParamPair:
    alpha: float
    beta: float

    def swapped(self) -> "ParamPair":
        return ParamPair(self.beta, self.alpha)

    @classmethod
    def coerce(cls, p) -> "ParamPair":
        return p if isinstance(p, ParamPair) else cls(float(p[0]), float(p[1]))


@dataclass
class MeasureReport:
    """A computed quantity with its error estimate and provenance."""

    value: float
    err_est: float
    method: Method
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.value = float(self.value)
        self.err_est = float(abs(self.err_est))
        self.method = Method(self.method)

    def __float__(self) -> float:
        return self.value

    def scaled(self, c: float, **meta) -> "MeasureReport":
        return MeasureReport(c * self.value, abs(c) * self.err_est, self.method,
                             {**self.meta, **meta})

    def to_dict(self) -> dict:
        return {"value": self.value, "err_est": self.err_est,
                "method": self.method.value, "meta": self.meta}


# ---------------------------------------------------------------------------
# domains and closed forms
# ---------------------------------------------------------------------------


def in_domain(X: Distribution, p) -> Membership:
    """Whether ``(α, β)`` lies in ``D_X``, for families where that set is known."""
    p = ParamPair.coerce(p)
    a, b = p.alpha, p.beta
    head = X.tag[0]
    inside = None
    if head == "uniform":
        inside = a > -1 and b > -1
    elif head == "power":
        inside = a > -1.0 / X.tag[1] and b > -1
    elif head == "exponential":
        inside = a > -1 and b > 0
    elif head == "laplace":
        inside = a > 0 and b > 0
    elif head == "erlang2":
        inside = a > -0.5 and b > 0
    elif head in ("bernoulli", "degenerate", "empirical"):
        inside = True           # finite sums
    elif head == "affine":
        gamma = X.tag[2]
        return in_domain(X.base, p if gamma > 0 else p.swapped())
    if inside is None:
        return Membership.UNDETERMINED
    return Membership.INSIDE if inside else Membership.OUTSIDE


def closed_form(X: Distribution, p) -> float | None:
    """Closed-form ``G_X(α, β)`` for the named families, ``None`` when unavailable.

    Raises
    ------
    DomainError
        If the family is known and ``(α, β)`` lies outside its domain.
    """
    p = ParamPair.coerce(p)
    head = X.tag[0]
    if head not in ("uniform", "power", "exponential", "laplace", "bernoulli", "degenerate"):
        return None
    _require_domain(X, p)
    a, b = p.alpha, p.beta
    if head == "uniform":
        return (X.r - X.l) * beta(a + 1, b + 1)
    if head == "power":
        return beta(a + 1.0 / X.theta, b + 1) / X.theta
    if head == "exponential":
        return beta(a + 1, b) / X.lam
    if head == "laplace":
        lam = X.scale
        return lam * (incomplete_beta(0.5, a, b + 1) + incomplete_beta(0.5, b, a + 1))
    if head == "bernoulli":
        q = X.tag[1]
        return (1 - q) ** a * q ** b
    return 0.0


def laplace_cigf_as_printed(scale: float, p) -> float:
    """Laplace expression in the form commonly tabulated, ``λ/2 [B(½;α,β+1) + B(½;α+1,β)]``.

    It does not equal the integral (nor is it symmetric in ``α, β``); kept only
    so tests can document the mismatch against :func:`closed_form`.
    """
    p = ParamPair.coerce(p)
    a, b = p.alpha, p.beta
    return 0.5 * scale * (incomplete_beta(0.5, a, b + 1) + incomplete_beta(0.5, a + 1, b))


def _require_domain(X: Distribution, p: ParamPair) -> Membership:
    m = in_domain(X, p)
    if m is Membership.OUTSIDE:
        raise DomainError(f"(α={p.alpha}, β={p.beta}) is outside D_X for {X.name}: "
                          f"{_culprit(X, p)}")
    return m


def _culprit(X: Distribution, p: ParamPair) -> str:
    bad = []
    if p.alpha < 0 or (p.alpha <= 0 and not np.isfinite(X.support.l)):
        bad.append(f"α={p.alpha} makes F^α non-integrable near the lower end")
    if p.beta < 0 or (p.beta <= 0 and not np.isfinite(X.support.r)):
        bad.append(f"β={p.beta} makes F̄^β non-integrable near the upper end")
    return "; ".join(bad) or "exponent pair leaves the finite region"


# ---------------------------------------------------------------------------
# generic quadrature of functionals of (F, F̄)
# ---------------------------------------------------------------------------


def integrate_functional(
    X: Distribution,
    phi: Callable[[np.ndarray, np.ndarray], np.ndarray],
    spec: QuadSpec = DEFAULT_QUAD,
) -> tuple[float, float, str]:
    """``∫ φ(F(x), F̄(x)) dx`` over the support of ``X``.

    Finite discrete laws give a sum over the gaps between support points.
    Laws with a density are integrated in the probability scale; others in
    ``x``, split at the median.

    Returns
    -------
    (value, err_est, form)
        ``form`` is ``"sum"``, ``"quantile"`` or ``"x"``.
    """
    if X.is_degenerate:
        return 0.0, 0.0, "sum"
    if isinstance(X, EmpiricalDiscrete):
        P = X.cum[:-1]
        S = X.tail[:-1]
        terms = np.asarray(phi(P, S), float) * np.diff(X.points)
        if not np.all(np.isfinite(terms)):
            raise DomainError("integrand is not finite on the discrete support")
        value = float(np.sum(terms))
        return value, 4 * _EPS * float(np.sum(np.abs(terms))), "sum"
    if X.has_pdf and getattr(X, "cheap_quantile", True):
        def left(u):
            return np.asarray(phi(u, 1.0 - u)) / np.asarray(X.density_quantile(u))

        def right(v):
            return np.asarray(phi(1.0 - v, v)) / np.asarray(X.density_isf(v))

        with np.errstate(all="ignore"):     # non-finite values are rejected by the integrator
            v1, e1 = integrate_1d(left, 0.0, 0.5, spec)
            v2, e2 = integrate_1d(right, 0.0, 0.5, spec)
        return v1 + v2, e1 + e2, "quantile"

    def fx(x):
        return np.asarray(phi(np.asarray(X.cdf(x)), np.asarray(X.sf(x))), float)

    m = X.median()
    with np.errstate(all="ignore"):
        v1, e1 = integrate_1d(fx, X.support.l, m, spec)
        v2, e2 = integrate_1d(fx, m, X.support.r, spec)
    return v1 + v2, e1 + e2, "x"


def _power_phi(a: float, b: float):
    def phi(F, S):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.power(F, a) * np.power(S, b)
    return phi


def _quadrature(X: Distribution, p: ParamPair, spec: QuadSpec, membership: Membership):
    try:
        v, e, form = integrate_functional(X, _power_phi(p.alpha, p.beta), spec)
    except (AccuracyError, DomainError) as exc:
        if membership is Membership.UNDETERMINED:
            raise DomainError(f"G_X(α={p.alpha}, β={p.beta}) appears to diverge for "
                              f"{X.name}: {_culprit(X, p)}") from exc
        if isinstance(exc, DomainError):
            # finite integral whose integrand overflows in double precision
            raise AccuracyError(f"G_X(α={p.alpha}, β={p.beta}) for {X.name} is too close "
                                f"to the edge of D_X to resolve: {exc}") from exc
        raise
    return MeasureReport(v, e, Method.QUADRATURE, {"form": form})


# ---------------------------------------------------------------------------
# public measures
# ---------------------------------------------------------------------------


def cigf(X: Distribution, p, spec: QuadSpec = DEFAULT_QUAD, *,
         method: str = "auto", cross_check: bool = False) -> MeasureReport:
    """``G_X(α, β)``.

    Parameters
    ----------
    X : Distribution
    p : ParamPair or (α, β)
    spec : QuadSpec
    method : {"auto", "closed_form", "series", "quadrature"}
        ``auto`` prefers a closed form, then the Erlang series when it is a
        finite sum, then quadrature.
    cross_check : bool
        With a closed form or series, also integrate and record the quadrature
        value in ``meta``.
    """
    p = ParamPair.coerce(p)
    membership = _require_domain(X, p)
    if X.is_degenerate:
        return MeasureReport(0.0, 0.0, Method.CLOSED_FORM, {"family": X.tag[0]})
    report = None
    if method in ("auto", "closed_form"):
        cf = closed_form(X, p)
        if cf is not None:
            report = MeasureReport(cf, 8 * _EPS * abs(cf), Method.CLOSED_FORM, {"family": X.tag[0]})
        elif method == "closed_form":
            raise DomainError(f"no closed form for {X.name}")
    # auto mode uses the Erlang series only where it terminates (integer α >= 0)
    finite_series = p.alpha >= 0 and float(p.alpha).is_integer()
    if report is None and X.tag[0] == "erlang2" and (
            method == "series" or (method == "auto" and finite_series)):
        report = cigf_erlang_series(X.lam, p, spec)
    elif method == "series" and report is None:
        raise DomainError(f"no series representation for {X.name}")
    if report is None:
        return _quadrature(X, p, spec, membership)
    if cross_check:
        q = _quadrature(X, p, spec, membership)
        report.meta["quadrature"] = q.value
        report.meta["quadrature_err"] = q.err_est
    return report


def cigf_erlang_series(lam: float, p, spec: QuadSpec = DEFAULT_QUAD) -> MeasureReport:
    """Binomial series for Erlang(2, λ)::

        (1/λ) Σ_n C(α,n) (-1)^n Γ(n+β+1, n+β) e^{n+β} (n+β)^{-(n+β+1)}

    Each term is assembled in log space.  For integer ``α ≥ 0`` the sum is
    finite; otherwise terms decay like ``n^{-α-3/2}`` and the budget in
    ``spec`` may be exhausted, which raises :class:`AccuracyError`.
    """
    p = ParamPair.coerce(p)
    a, b = p.alpha, p.beta
    if not lam > 0:
        raise DomainError(f"erlang2 needs λ > 0, got {lam}")
    if not b > 0:
        raise DomainError(f"erlang2 series needs β > 0, got β={b}")
    if not a > -0.5:
        raise DomainError(f"erlang2 series needs α > -1/2, got α={a}")

    def term(n: int) -> float:
        c = gen_binomial(a, n)
        if c == 0.0:
            return 0.0
        m = n + b
        log_mag = log_upper_incomplete_gamma(m + 1, m) + m - (m + 1) * math.log(m)
        return (-1) ** n * c * math.exp(log_mag)

    value, err, used = alternating_series(term, spec)
    return MeasureReport(value / lam, err / lam, Method.SERIES, {"terms": used})


def h_measure(X: Distribution, alpha: float, spec: QuadSpec = DEFAULT_QUAD, **kw) -> MeasureReport:
    """``H_X(α) = G_X(α, 0) = ∫ F^α dx``."""
    return cigf(X, ParamPair(alpha, 0.0), spec, **kw)


def k_measure(X: Distribution, beta_: float, spec: QuadSpec = DEFAULT_QUAD, **kw) -> MeasureReport:
    """``K_X(β) = G_X(0, β) = ∫ F̄^β dx``."""
    return cigf(X, ParamPair(0.0, beta_), spec, **kw)


def cigf_odds(X: Distribution, beta_: float, spec: QuadSpec = DEFAULT_QUAD, **kw) -> MeasureReport:
    """``∫ (F̄/F)^β dx = G_X(-β, β)``."""
    p = ParamPair(-beta_, beta_)
    if in_domain(X, p) is Membership.OUTSIDE:
        raise DomainError(f"β={beta_} is outside the odds domain of {X.name}")
    rep = cigf(X, p, spec, **kw)
    rep.meta["odds_beta"] = beta_
    return rep


def cigf_affine_check(X: Distribution, gamma: float, delta: float, p,
                      spec: QuadSpec = DEFAULT_QUAD, **kw) -> tuple[MeasureReport, MeasureReport]:
    """Both sides of the affine law ``G_{γX+δ}(α,β) = γG_X(α,β)`` (``γ > 0``)
    or ``|γ| G_X(β,α)`` (``γ < 0``)."""
    p = ParamPair.coerce(p)
    lhs = cigf(dist.affine(X, gamma, delta), p, spec, **kw)
    rhs = cigf(X, p if gamma > 0 else p.swapped(), spec, **kw).scaled(abs(gamma))
    return lhs, rhs


def cigf_beta_representation(X: Distribution, p, n_mc: int, seed: int) -> MeasureReport:
    """Monte Carlo of ``B(α+1, β+1) E[1/f(F^{-1}(Y))]`` with ``Y ~ Beta(α+1, β+1)``."""
    p = ParamPair.coerce(p)
    if not X.has_pdf:
        raise DomainError(f"{X.name} has no density; the beta representation needs one")
    if not (p.alpha > -1 and p.beta > -1):
        raise DomainError(f"beta representation needs α, β > -1, got ({p.alpha}, {p.beta})")
    rng = np.random.default_rng(seed)
    y = rng.beta(p.alpha + 1, p.beta + 1, size=n_mc)
    r = 1.0 / np.asarray(X.density_quantile(y), float)
    if not np.all(np.isfinite(r)):
        raise DomainError("density vanished at a sampled quantile")
    B = beta(p.alpha + 1, p.beta + 1)
    sd = float(np.std(r, ddof=1)) if n_mc > 1 else math.inf
    return MeasureReport(B * float(np.mean(r)), 3 * sd / math.sqrt(n_mc) * B,
                         Method.MONTE_CARLO, {"n_mc": n_mc, "seed": seed})


def golomb_ig(X: Distribution, nu: float, spec: QuadSpec = DEFAULT_QUAD) -> MeasureReport:
    """Golomb's information generating function ``∫ f(x)^ν dx``."""
    if not X.has_pdf:
        raise DomainError(f"{X.name} has no density")
    if nu == 1:
        return MeasureReport(1.0, 0.0, Method.CLOSED_FORM)
    if X.tag[0] == "exponential":
        return MeasureReport(X.lam ** (nu - 1) / nu, 0.0, Method.CLOSED_FORM)
    if X.tag[0] == "uniform":
        return MeasureReport((X.r - X.l) ** (1 - nu), 0.0, Method.CLOSED_FORM)

    def f(x):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            d = np.asarray(X.pdf(x), float)
            return np.where(d > 0, np.power(d, nu), 0.0)

    lo, hi = X.support.l, X.support.r
    mid = X.median() if X.cheap_quantile else (
        0.5 * (lo + hi) if np.isfinite(lo + hi) else (lo + 1.0 if np.isfinite(lo) else 0.0))
    try:
        v1, e1 = integrate_1d(f, lo, mid, spec)
        v2, e2 = integrate_1d(f, mid, hi, spec)
    except (AccuracyError, DomainError) as exc:
        raise DomainError(f"∫ f^ν diverges or is unresolved for ν={nu} on {X.name}") from exc
    return MeasureReport(v1 + v2, e1 + e2, Method.QUADRATURE)


def cigf_equilibrium_series(X: Distribution, p, spec: QuadSpec = DEFAULT_QUAD) -> MeasureReport:
    """``Σ_n C(α,n)(-1)^n E[X]^{n+β} IG_{X_e}(n+β)`` with ``X_e`` the equilibrium law."""
    p = ParamPair.coerce(p)
    _require_domain(X, p)
    Xe = dist.equilibrium(X, spec)
    m = X.mean
    errs = [0.0]

    def term(n: int) -> float:
        c = gen_binomial(p.alpha, n)
        if c == 0.0:
            return 0.0
        ig = golomb_ig(Xe, n + p.beta, spec)
        scale = m ** (n + p.beta)
        errs[0] += abs(c) * scale * ig.err_est
        return (-1) ** n * c * scale * ig.value

    value, err, used = alternating_series(term, spec)
    return MeasureReport(value, err + errs[0], Method.SERIES, {"terms": used})
