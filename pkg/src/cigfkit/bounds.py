"""Inequalities bounding the CIGF and checks of each against computed values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cigf import Membership, ParamPair, cigf, h_measure, in_domain, k_measure
from .distributions import Distribution
from .numerics import DEFAULT_QUAD, AccuracyError, DomainError, QuadSpec

__all__ = [
    "BoundCheck",
    "BoundsReport",
    "MinkowskiBounds",
    "bernoulli_bounds",
    "chernoff_bound",
    "chernoff_grid_infimum",
    "erlang_chernoff_infimum",
    "holder_bound",
    "mgf_radius",
    "minkowski_bounds",
    "verify_bounds",
]

TOL = 1e-9


def mgf_radius(X: Distribution) -> float:
    """Largest ``s0`` such that ``M_X`` is finite on ``(-s0, s0)``."""
    if X.support.finite:
        return math.inf
    head = X.tag[0]
    if head in ("exponential", "erlang2"):
        return X.lam
    if head == "laplace":
        return 1.0 / X.scale
    raise DomainError(f"MGF radius unknown for {X.name}")


def _g(c: float, r: float) -> float:
    if math.isinf(r):
        if not c > 0:
            raise DomainError("with r = inf the bound needs α s1 + β s2 > 0")
        return 1.0 / c
    if c == 0:
        return r
    return -math.expm1(-c * r) / c


def chernoff_bound(X: Distribution, p, s1: float, s2: float, r: float | None = None
                   ) -> tuple[float, str]:
    """Chernoff-type bound ``g(r; α, β, s) M(s1)^α M(s2)^β``.

    Returns
    -------
    (bound, side)
        ``side`` is ``"upper"`` for ``α, β >= 0`` and ``"lower"`` for ``α, β <= 0``.
    """
    p = ParamPair.coerce(p)
    a, b = p.alpha, p.beta
    if not (s1 < 0 < s2):
        raise DomainError(f"Chernoff bound needs s1 < 0 < s2, got ({s1}, {s2})")
    if a >= 0 and b >= 0:
        side = "upper"
        if X.support.l < 0:
            raise DomainError("Chernoff bound needs a nonnegative random variable")
    elif a <= 0 and b <= 0:
        side = "lower"
        if X.support.l != 0:
            raise DomainError("lower Chernoff bound needs support starting at 0")
    else:
        raise DomainError(f"(α={a}, β={b}) mixes signs; no Chernoff bound applies")
    r = X.support.r if r is None else r
    s0 = mgf_radius(X)
    if not (-s0 < s1 and s2 < s0):
        raise DomainError(f"MGF is infinite outside (-{s0}, {s0})")
    m1, m2 = float(X.mgf(s1)), float(X.mgf(s2))
    return _g(a * s1 + b * s2, r) * m1 ** a * m2 ** b, side


def chernoff_grid_infimum(X: Distribution, p, n_grid: int = 20, r: float | None = None
                          ) -> tuple[float, float, float]:
    """Smallest upper Chernoff bound over an ``n_grid × n_grid`` grid of ``(s1, s2)``.

    ``s1`` is spaced geometrically towards 0 (where the optimum tends to sit);
    ``s2`` is spaced linearly across ``(0, s0)``.

    Returns
    -------
    (bound, s1, s2)
    """
    p = ParamPair.coerce(p)
    s0 = mgf_radius(X)
    if math.isinf(s0):
        s0 = 10.0 / X.support.width
    best = (math.inf, math.nan, math.nan)
    for s1 in -s0 * np.geomspace(1e-4, 0.95, n_grid):
        for s2 in s0 * np.linspace(0.025, 0.975, n_grid):
            try:
                b, _ = chernoff_bound(X, p, float(s1), float(s2), r)
            except DomainError:
                continue
            if b < best[0]:
                best = (b, float(s1), float(s2))
    if math.isinf(best[0]):
        raise DomainError("no admissible (s1, s2) on the grid")
    return best


def erlang_chernoff_infimum(lam: float, beta_: float) -> float:
    """Analytic infimum of the Chernoff bound for Erlang(2, λ), ``(α, β) > 0``."""
    return (1.0 / lam) * 2.0 ** (-2 * beta_) * ((1 + 2 * beta_) / beta_) ** (1 + 2 * beta_)


def bernoulli_bounds(X: Distribution, p, spec: QuadSpec = DEFAULT_QUAD, form: str = "auto"
                     ) -> tuple[float, bool]:
    """``K(β) - α K(β+1)`` when ``α ∈ [0,1]``, or ``H(α) - β H(α+1)`` when ``β ∈ [0,1]``.

    Returns ``(nan, False)`` when neither form applies or a needed marginal
    is infinite.
    """
    p = ParamPair.coerce(p)
    a, b = p.alpha, p.beta
    forms = {"auto": ("K", "H"), "K": ("K",), "H": ("H",)}[form]
    for f in forms:
        try:
            if f == "K" and 0 <= a <= 1:
                return k_measure(X, b, spec).value - a * k_measure(X, b + 1, spec).value, True
            if f == "H" and 0 <= b <= 1:
                return h_measure(X, a, spec).value - b * h_measure(X, a + 1, spec).value, True
        except DomainError:
            continue
    return math.nan, False


@dataclass
class MinkowskiBounds:
    gamma: float
    K: float
    H: float
    G_diag: float
    K_lower: float
    K_upper: float
    H_lower: float
    H_upper: float
    G_diag_upper_viaK: float
    G_diag_upper_viaH: float
    notes: list[str] = field(default_factory=list)


def minkowski_bounds(X: Distribution, gamma: float, spec: QuadSpec = DEFAULT_QUAD) -> MinkowskiBounds:
    """Bounds on ``K(γ)``, ``H(γ)`` and ``G(γ, γ)`` for bounded support and ``γ >= 1``.

    A lower bound whose inner difference is negative is vacuous; the
    difference is clamped at 0 and the clamp is recorded in ``notes``.
    """
    if not X.support.finite:
        raise DomainError("Minkowski bounds need a finite support")
    if not gamma >= 1:
        raise DomainError(f"Minkowski bounds need γ >= 1, got {gamma}")
    w = X.support.width ** (1.0 / gamma)
    K = k_measure(X, gamma, spec).value
    H = h_measure(X, gamma, spec).value
    notes = []

    def lower(other: float, label: str) -> float:
        d = w - other ** (1.0 / gamma)
        if d < 0:
            notes.append(f"{label} lower bound vacuous (inner difference {d:.3g} clamped to 0)")
            d = 0.0
        return d ** gamma

    return MinkowskiBounds(
        gamma=gamma, K=K, H=H,
        G_diag=cigf(X, (gamma, gamma), spec).value,
        K_lower=lower(H, "K"),
        K_upper=(w + H ** (1.0 / gamma)) ** gamma,
        H_lower=lower(K, "H"),
        H_upper=(w + K ** (1.0 / gamma)) ** gamma,
        G_diag_upper_viaK=(K ** (1.0 / gamma) + k_measure(X, 2 * gamma, spec).value ** (1.0 / gamma)) ** gamma,
        G_diag_upper_viaH=(H ** (1.0 / gamma) + h_measure(X, 2 * gamma, spec).value ** (1.0 / gamma)) ** gamma,
        notes=notes,
    )


def holder_bound(X: Distribution, theta: float, spec: QuadSpec = DEFAULT_QUAD) -> float:
    """``(r - E X)^θ (E X - l)^{1-θ}``, an upper bound for ``G(θ, 1-θ)``."""
    if not X.support.finite:
        raise DomainError("Hölder bound needs a finite support")
    if not 0 < theta < 1:
        raise DomainError(f"Hölder bound needs θ in (0, 1), got {theta}")
    m = X.mean
    return (X.support.r - m) ** theta * (m - X.support.l) ** (1 - theta)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class BoundCheck:
    name: str
    params: dict
    value: float          # the quantity being bounded
    bound: float
    side: str             # "upper": value <= bound; "lower": value >= bound
    margin: float
    passed: bool
    note: str = ""


@dataclass
class BoundsReport:
    distribution: str
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[BoundCheck]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, params: dict, value: float, bound: float, side: str, note: str = ""):
        margin = bound - value if side == "upper" else value - bound
        self.checks.append(BoundCheck(name, params, value, bound, side, margin,
                                      margin >= -TOL, note))


_PAIRS = [(a, b) for a in (0.25, 0.5, 1.0, 2.0) for b in (0.25, 0.5, 1.0, 2.0)]
_NEG_PAIRS = [(-0.25, -0.25), (-0.25, -0.5), (-0.4, -0.1)]


def verify_bounds(X: Distribution, pairs=None, gammas=(1.0, 1.5, 2.0, 3.0),
                  thetas=(0.1, 0.25, 0.5, 0.75, 0.9), spec: QuadSpec = DEFAULT_QUAD,
                  n_s: int = 5) -> BoundsReport:
    """Evaluate every applicable inequality on a parameter grid.

    Chernoff bounds are checked on an ``n_s × n_s`` grid of ``(s1, s2)`` for
    each pair, including negative pairs where ``D_X`` admits them.
    """
    rep = BoundsReport(X.name)
    pairs = _PAIRS if pairs is None else [tuple(map(float, q)) for q in pairs]
    G = {}

    def g_of(q):
        if q not in G:
            G[q] = cigf(X, q, spec).value
        return G[q]

    # Chernoff
    try:
        s0 = mgf_radius(X)
        chernoff_ok = X.support.l >= 0
    except DomainError:
        chernoff_ok = False
    if chernoff_ok:
        s0 = 10.0 / X.support.width if math.isinf(s0) else s0
        neg = [q for q in _NEG_PAIRS if X.support.l == 0 and in_domain(X, q) is Membership.INSIDE]
        for q in [q for q in pairs if in_domain(X, q) is not Membership.OUTSIDE] + neg:
            for s1 in -s0 * np.linspace(0.05, 0.9, n_s):
                for s2 in s0 * np.linspace(0.05, 0.9, n_s):
                    try:
                        bnd, side = chernoff_bound(X, q, float(s1), float(s2))
                    except DomainError:
                        continue
                    rep.add("chernoff", {"alpha": q[0], "beta": q[1], "s1": float(s1),
                                         "s2": float(s2)}, g_of(q), bnd, side)

    # Bernoulli
    for q in pairs:
        if in_domain(X, q) is Membership.OUTSIDE:
            continue
        for form in ("K", "H"):
            try:
                bnd, ok = bernoulli_bounds(X, q, spec, form)
            except (DomainError, AccuracyError):
                ok = False
            if ok:
                rep.add(f"bernoulli_{form}", {"alpha": q[0], "beta": q[1]}, g_of(q), bnd, "upper")

    # Minkowski and Hölder need bounded support
    if X.support.finite:
        for gam in gammas:
            mb = minkowski_bounds(X, gam, spec)
            note = "; ".join(mb.notes)
            par = {"gamma": gam}
            rep.add("minkowski_K_lower", par, mb.K, mb.K_lower, "lower", note)
            rep.add("minkowski_K_upper", par, mb.K, mb.K_upper, "upper")
            rep.add("minkowski_H_lower", par, mb.H, mb.H_lower, "lower", note)
            rep.add("minkowski_H_upper", par, mb.H, mb.H_upper, "upper")
            rep.add("minkowski_G_viaK", par, mb.G_diag, mb.G_diag_upper_viaK, "upper")
            rep.add("minkowski_G_viaH", par, mb.G_diag, mb.G_diag_upper_viaH, "upper")
        for th in thetas:
            if in_domain(X, (th, 1 - th)) is Membership.OUTSIDE:
                continue
            rep.add("holder", {"theta": th}, g_of((th, 1 - th)), holder_bound(X, th, spec), "upper")
    return rep
