"""Univariate laws consumed by every measure in the package.

A :class:`Distribution` exposes CDF, survival function, quantile and inverse
survival function (both inverses are needed so that either tail can be
reached without cancellation), and optionally a PDF, MGF and mean.  All
methods accept scalars or numpy arrays.

Parametric families carry a ``tag`` so that closed forms elsewhere can
recognise them; transforms fold back onto a family whenever the result is
again a member (e.g. a proportional reversed hazard of Unif(0,1) is a Power
law).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize, special

from .numerics import DEFAULT_QUAD, DomainError, QuadSpec, integrate_1d

__all__ = [
    "Distribution",
    "EmpiricalDiscrete",
    "SupportInterval",
    "affine",
    "equilibrium",
    "from_samples",
    "make_family",
    "odds",
    "parse_spec",
    "prop_hazard",
    "prop_rev_hazard",
]


def _ret(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


@dataclass(frozen=True)
class SupportInterval:
    """Lower and upper support limits ``l <= r`` (equal only for a point mass)."""

    l: float
    r: float

    def __post_init__(self):
        if not self.l <= self.r:
            raise DomainError(f"support needs l <= r, got ({self.l}, {self.r})")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.l) and math.isfinite(self.r)

    @property
    def width(self) -> float:
        return self.r - self.l

    def close_to(self, other: "SupportInterval", tol: float = 1e-12) -> bool:
        def same(a, b):
            return a == b or (math.isfinite(a) and math.isfinite(b) and abs(a - b) <= tol)
        return same(self.l, other.l) and same(self.r, other.r)


class Distribution:
    """Base class; subclasses implement ``cdf``, ``sf``, ``quantile``, ``isf``."""

    tag: tuple = ("generic",)
    support: SupportInterval
    has_pdf: bool = False
    cheap_quantile: bool = True     # False when the quantile needs root finding

    # -- core interface ---------------------------------------------------
    def cdf(self, x):
        raise NotImplementedError

    def sf(self, x):
        raise NotImplementedError

    def quantile(self, u):
        return self._invert(u, self.cdf)

    def isf(self, v):
        return self._invert(v, lambda x: -self.sf(x), sign=-1)

    def pdf(self, x):
        raise DomainError(f"{self.name} has no density")

    def mgf(self, s):
        raise DomainError(f"{self.name} has no moment generating function available")

    def density_quantile(self, u):
        """``f(F^{-1}(u))``; families override with forms that avoid rounding ``x``."""
        return self.pdf(self.quantile(u))

    def density_isf(self, v):
        """``f(F̄^{-1}(v))``, the same quantity addressed from the upper tail."""
        return self.pdf(self.isf(v))

    # -- derived accessors -------------------------------------------------
    @property
    def name(self) -> str:
        head, *params = self.tag
        return head + ("(" + ", ".join(map(repr, params)) + ")" if params else "")

    @property
    def mean(self) -> float | None:
        """``∫_0^1 Q(u) du``, evaluated from both tails."""
        try:
            lo, _ = integrate_1d(lambda u: self.quantile(u), 0.0, 0.5)
            hi, _ = integrate_1d(lambda v: self.isf(v), 0.0, 0.5)
        except (DomainError, ArithmeticError):
            return None
        return lo + hi

    def logcdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            sf = np.asarray(self.sf(x), dtype=float)
            out = np.where(sf < 0.5, np.log1p(-np.minimum(sf, 0.5)),
                           np.log(np.asarray(self.cdf(x), dtype=float)))
        return _ret(out)

    def logsf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            cdf = np.asarray(self.cdf(x), dtype=float)
            out = np.where(cdf < 0.5, np.log1p(-np.minimum(cdf, 0.5)),
                           np.log(np.asarray(self.sf(x), dtype=float)))
        return _ret(out)

    def cum_hazard(self, x):
        """``Λ(x) = -log F̄(x)``."""
        return _ret(-np.asarray(self.logsf(x)))

    def cum_rev_hazard(self, x):
        """``T(x) = -log F(x)``."""
        return _ret(-np.asarray(self.logcdf(x)))

    def median(self) -> float:
        return float(self.quantile(0.5))

    def sample(self, size, rng: np.random.Generator) -> np.ndarray:
        """Inverse-transform sampling."""
        return np.asarray(self.quantile(rng.random(size)), dtype=float)

    @property
    def is_degenerate(self) -> bool:
        return self.support.l == self.support.r

    def window(self, tail_mass: float) -> tuple[float, float]:
        """Support truncated to ``[F^-1(tail_mass), F̄^-1(tail_mass)]`` where infinite."""
        lo = self.support.l if math.isfinite(self.support.l) else float(self.quantile(tail_mass))
        hi = self.support.r if math.isfinite(self.support.r) else float(self.isf(tail_mass))
        return lo, hi

    # -- helpers ------------------------------------------------------------
    def _invert(self, p, fn, sign: float = 1.0):
        p = np.asarray(p, dtype=float)
        out = np.empty(p.shape)
        l, r = self.support.l, self.support.r
        for idx, pi in np.ndenumerate(p):
            target = sign * pi
            if pi <= 0.0:
                out[idx] = l if sign > 0 else r
                continue
            if pi >= 1.0:
                out[idx] = r if sign > 0 else l
                continue
            a, b = _bracket(lambda x: fn(x) - target, l, r)
            out[idx] = optimize.brentq(lambda x: fn(x) - target, a, b, xtol=1e-14, rtol=4e-16)
        return _ret(out)

    def __repr__(self) -> str:
        return f"<Distribution {self.name}>"


def _bracket(g, l: float, r: float) -> tuple[float, float]:
    a = l if math.isfinite(l) else -1.0
    b = r if math.isfinite(r) else 1.0
    step = 1.0
    while not math.isfinite(l) and g(a) > 0:
        a -= step
        step *= 2
    step = 1.0
    while not math.isfinite(r) and g(b) < 0:
        b += step
        step *= 2
    return a, b


# ---------------------------------------------------------------------------
# parametric families
# ---------------------------------------------------------------------------


class Uniform(Distribution):
    has_pdf = True

    def __init__(self, l: float, r: float):
        if not l < r:
            raise DomainError(f"uniform needs l < r, got ({l}, {r})")
        self.l, self.r = float(l), float(r)
        self.support = SupportInterval(self.l, self.r)
        self.tag = ("uniform", self.l, self.r)

    def cdf(self, x):
        return _ret(np.clip((np.asarray(x, float) - self.l) / (self.r - self.l), 0.0, 1.0))

    def sf(self, x):
        return _ret(np.clip((self.r - np.asarray(x, float)) / (self.r - self.l), 0.0, 1.0))

    def quantile(self, u):
        return _ret(self.l + np.asarray(u, float) * (self.r - self.l))

    def isf(self, v):
        return _ret(self.r - np.asarray(v, float) * (self.r - self.l))

    def pdf(self, x):
        x = np.asarray(x, float)
        return _ret(np.where((x >= self.l) & (x <= self.r), 1.0 / (self.r - self.l), 0.0))

    def density_quantile(self, u):
        return _ret(np.full(np.shape(u), 1.0 / (self.r - self.l)))

    density_isf = density_quantile

    def mgf(self, s):
        s = np.asarray(s, float)
        with np.errstate(invalid="ignore", divide="ignore"):
            val = (np.exp(s * self.r) - np.exp(s * self.l)) / (s * (self.r - self.l))
        return _ret(np.where(s == 0, 1.0, val))

    @property
    def mean(self):
        return 0.5 * (self.l + self.r)


class Power(Distribution):
    """``F(x) = x^θ`` on (0, 1)."""

    has_pdf = True

    def __init__(self, theta: float):
        if not theta > 0:
            raise DomainError(f"power needs θ > 0, got {theta}")
        self.theta = float(theta)
        self.support = SupportInterval(0.0, 1.0)
        self.tag = ("power", self.theta)

    def cdf(self, x):
        x = np.clip(np.asarray(x, float), 0.0, 1.0)
        return _ret(x ** self.theta)

    def sf(self, x):
        x = np.clip(np.asarray(x, float), 0.0, 1.0)
        with np.errstate(divide="ignore"):
            return _ret(-np.expm1(self.theta * np.log(x)))

    def quantile(self, u):
        return _ret(np.asarray(u, float) ** (1.0 / self.theta))

    def isf(self, v):
        return _ret(np.exp(np.log1p(-np.asarray(v, float)) / self.theta))

    def pdf(self, x):
        x = np.asarray(x, float)
        inside = (x >= 0) & (x <= 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = self.theta * np.where(inside, x, 0.5) ** (self.theta - 1.0)
        return _ret(np.where(inside, val, 0.0))

    def density_quantile(self, u):
        with np.errstate(divide="ignore"):
            return _ret(self.theta * np.asarray(u, float) ** (1.0 - 1.0 / self.theta))

    def density_isf(self, v):
        return _ret(self.theta * np.exp((1.0 - 1.0 / self.theta) * np.log1p(-np.asarray(v, float))))

    def mgf(self, s):
        return _ret(special.hyp1f1(self.theta, self.theta + 1.0, np.asarray(s, float)))

    @property
    def mean(self):
        return self.theta / (self.theta + 1.0)


class Exponential(Distribution):
    has_pdf = True

    def __init__(self, lam: float):
        if not lam > 0:
            raise DomainError(f"exponential needs λ > 0, got {lam}")
        self.lam = float(lam)
        self.support = SupportInterval(0.0, math.inf)
        self.tag = ("exponential", self.lam)

    def cdf(self, x):
        x = np.maximum(np.asarray(x, float), 0.0)
        return _ret(-np.expm1(-self.lam * x))

    def sf(self, x):
        x = np.maximum(np.asarray(x, float), 0.0)
        return _ret(np.exp(-self.lam * x))

    def logsf(self, x):
        return _ret(-self.lam * np.maximum(np.asarray(x, float), 0.0))

    def quantile(self, u):
        return _ret(-np.log1p(-np.asarray(u, float)) / self.lam)

    def isf(self, v):
        with np.errstate(divide="ignore"):
            return _ret(-np.log(np.asarray(v, float)) / self.lam)

    def pdf(self, x):
        x = np.asarray(x, float)
        return _ret(np.where(x >= 0, self.lam * np.exp(-self.lam * np.maximum(x, 0.0)), 0.0))

    def density_quantile(self, u):
        return _ret(self.lam * (1.0 - np.asarray(u, float)))

    def density_isf(self, v):
        return _ret(self.lam * np.asarray(v, float))

    def mgf(self, s):
        s = np.asarray(s, float)
        if np.any(s >= self.lam):
            raise DomainError(f"exponential MGF is infinite for s >= {self.lam}")
        return _ret(self.lam / (self.lam - s))

    @property
    def mean(self):
        return 1.0 / self.lam


class Laplace(Distribution):
    """Laplace law centred at 0 with scale ``λ``: density ``e^{-|x|/λ} / (2λ)``."""

    has_pdf = True

    def __init__(self, scale: float):
        if not scale > 0:
            raise DomainError(f"laplace needs λ > 0, got {scale}")
        self.scale = float(scale)
        self.support = SupportInterval(-math.inf, math.inf)
        self.tag = ("laplace", self.scale)

    def cdf(self, x):
        z = np.asarray(x, float) / self.scale
        return _ret(np.where(z < 0, 0.5 * np.exp(np.minimum(z, 0.0)),
                             1.0 - 0.5 * np.exp(-np.maximum(z, 0.0))))

    def sf(self, x):
        return self.cdf(-np.asarray(x, float))

    def quantile(self, u):
        u = np.asarray(u, float)
        with np.errstate(divide="ignore"):
            return _ret(np.where(u < 0.5, self.scale * np.log(2.0 * np.minimum(u, 0.5)),
                                 -self.scale * np.log(2.0 * (1.0 - np.maximum(u, 0.5)))))

    def isf(self, v):
        return _ret(-np.asarray(self.quantile(v)))

    def pdf(self, x):
        return _ret(np.exp(-np.abs(np.asarray(x, float)) / self.scale) / (2.0 * self.scale))

    def density_quantile(self, u):
        u = np.asarray(u, float)
        return _ret(np.minimum(u, 1.0 - u) / self.scale)

    density_isf = density_quantile

    def mgf(self, s):
        s = np.asarray(s, float)
        if np.any(np.abs(s) >= 1.0 / self.scale):
            raise DomainError(f"laplace MGF is infinite for |s| >= {1.0 / self.scale}")
        return _ret(1.0 / (1.0 - (self.scale * s) ** 2))

    @property
    def mean(self):
        return 0.0


class Erlang2(Distribution):
    """Erlang law with shape 2 and rate ``λ``: ``F(x) = 1 - e^{-λx} - λx e^{-λx}``.

    The CDF is evaluated as the regularised lower incomplete gamma function,
    which is the same function without the cancellation near zero.
    """

    has_pdf = True

    def __init__(self, lam: float):
        if not lam > 0:
            raise DomainError(f"erlang2 needs λ > 0, got {lam}")
        self.lam = float(lam)
        self.support = SupportInterval(0.0, math.inf)
        self.tag = ("erlang2", self.lam)

    def cdf(self, x):
        return _ret(special.gammainc(2.0, self.lam * np.maximum(np.asarray(x, float), 0.0)))

    def sf(self, x):
        return _ret(special.gammaincc(2.0, self.lam * np.maximum(np.asarray(x, float), 0.0)))

    def quantile(self, u):
        return _ret(special.gammaincinv(2.0, np.asarray(u, float)) / self.lam)

    def isf(self, v):
        return _ret(special.gammainccinv(2.0, np.asarray(v, float)) / self.lam)

    def pdf(self, x):
        x = np.maximum(np.asarray(x, float), 0.0)
        return _ret(self.lam ** 2 * x * np.exp(-self.lam * x))

    def mgf(self, s):
        s = np.asarray(s, float)
        if np.any(s >= self.lam):
            raise DomainError(f"erlang2 MGF is infinite for s >= {self.lam}")
        return _ret((self.lam / (self.lam - s)) ** 2)

    @property
    def mean(self):
        return 2.0 / self.lam


class EmpiricalDiscrete(Distribution):
    """Finitely supported law on sorted points ``x_1 < ... < x_n``."""

    def __init__(self, points: Sequence[float], probs: Sequence[float], tag: tuple | None = None):
        pts = np.asarray(points, float)
        pr = np.asarray(probs, float)
        if pts.ndim != 1 or pts.size == 0 or pts.shape != pr.shape:
            raise DomainError("points and probabilities must be non-empty 1-D arrays of equal length")
        if np.any(pr < 0) or abs(pr.sum() - 1.0) > 1e-12:
            raise DomainError("probabilities must be nonnegative and sum to 1")
        order = np.argsort(pts, kind="stable")
        pts, pr = pts[order], pr[order]
        if np.any(np.diff(pts) == 0):
            raise DomainError("support points must be distinct")
        keep = pr > 0
        self.points = pts[keep]
        self.probs = pr[keep] / pr[keep].sum()
        # cumulative and complementary sums, each accumulated from its own end
        self.cum = np.cumsum(self.probs)
        self.tail = np.concatenate([np.cumsum(self.probs[::-1])[::-1][1:], [0.0]])
        self.cum[-1] = 1.0
        self.support = SupportInterval(float(self.points[0]), float(self.points[-1]))
        self.tag = tag or ("empirical", len(self.points))

    def cdf(self, x):
        idx = np.searchsorted(self.points, np.asarray(x, float), side="right")
        return _ret(np.where(idx > 0, self.cum[np.maximum(idx - 1, 0)], 0.0))

    def sf(self, x):
        idx = np.searchsorted(self.points, np.asarray(x, float), side="right")
        return _ret(np.where(idx > 0, self.tail[np.maximum(idx - 1, 0)], 1.0))

    def quantile(self, u):
        # right-continuous inverse sup{x : F(x) <= u}
        idx = np.searchsorted(self.cum, np.asarray(u, float), side="right")
        return _ret(self.points[np.minimum(idx, len(self.points) - 1)])

    def isf(self, v):
        # smallest x with F̄(x) <= v
        idx = np.searchsorted(-self.tail, -np.asarray(v, float), side="left")
        return _ret(self.points[np.minimum(idx, len(self.points) - 1)])

    def mgf(self, s):
        s = np.asarray(s, float)
        return _ret(np.sum(self.probs * np.exp(np.multiply.outer(s, self.points)), axis=-1))

    @property
    def mean(self):
        return float(np.dot(self.probs, self.points))


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


class _Affine(Distribution):
    """Law of ``γX + δ`` for a continuous ``X``."""

    def __init__(self, base: Distribution, gamma: float, delta: float):
        self.base, self.gamma, self.delta = base, float(gamma), float(delta)
        ends = sorted([gamma * base.support.l + delta, gamma * base.support.r + delta])
        self.support = SupportInterval(*ends)
        self.has_pdf = base.has_pdf
        self.tag = ("affine", base.tag, self.gamma, self.delta)

    def _z(self, y):
        return (np.asarray(y, float) - self.delta) / self.gamma

    def cdf(self, y):
        return self.base.cdf(self._z(y)) if self.gamma > 0 else self.base.sf(self._z(y))

    def sf(self, y):
        return self.base.sf(self._z(y)) if self.gamma > 0 else self.base.cdf(self._z(y))

    def quantile(self, u):
        inner = self.base.quantile(u) if self.gamma > 0 else self.base.isf(u)
        return _ret(self.gamma * np.asarray(inner) + self.delta)

    def isf(self, v):
        inner = self.base.isf(v) if self.gamma > 0 else self.base.quantile(v)
        return _ret(self.gamma * np.asarray(inner) + self.delta)

    def pdf(self, y):
        return _ret(np.asarray(self.base.pdf(self._z(y))) / abs(self.gamma))

    def density_quantile(self, u):
        inner = self.base.density_quantile(u) if self.gamma > 0 else self.base.density_isf(u)
        return _ret(np.asarray(inner) / abs(self.gamma))

    def density_isf(self, v):
        inner = self.base.density_isf(v) if self.gamma > 0 else self.base.density_quantile(v)
        return _ret(np.asarray(inner) / abs(self.gamma))

    def mgf(self, s):
        s = np.asarray(s, float)
        return _ret(np.exp(s * self.delta) * np.asarray(self.base.mgf(self.gamma * s)))

    @property
    def mean(self):
        m = self.base.mean
        return None if m is None else self.gamma * m + self.delta


def affine(X: Distribution, gamma: float, delta: float) -> Distribution:
    """Law of ``γX + δ``; the CDF is reflected when ``γ < 0``."""
    if gamma == 0:
        raise DomainError("affine transform needs γ != 0")
    if gamma == 1 and delta == 0:
        return X
    if isinstance(X, EmpiricalDiscrete):
        pts = gamma * X.points + delta
        return EmpiricalDiscrete(pts, X.probs)
    if isinstance(X, Uniform):
        return Uniform(*sorted([gamma * X.l + delta, gamma * X.r + delta]))
    if delta == 0:
        if isinstance(X, Laplace):
            return Laplace(abs(gamma) * X.scale)
        if gamma > 0 and isinstance(X, Exponential):
            return Exponential(X.lam / gamma)
        if gamma > 0 and isinstance(X, Erlang2):
            return Erlang2(X.lam / gamma)
    if isinstance(X, _Affine):
        return affine(X.base, gamma * X.gamma, gamma * X.delta + delta)
    return _Affine(X, gamma, delta)


class _PropHazard(Distribution):
    def __init__(self, base: Distribution, gamma: float):
        self.base, self.gamma = base, float(gamma)
        self.support = base.support
        self.has_pdf = base.has_pdf
        self.tag = ("prop_hazard", base.tag, self.gamma)

    def sf(self, x):
        return _ret(np.exp(self.gamma * np.asarray(self.base.logsf(x))))

    def cdf(self, x):
        return _ret(-np.expm1(self.gamma * np.asarray(self.base.logsf(x))))

    def logsf(self, x):
        return _ret(self.gamma * np.asarray(self.base.logsf(x)))

    # w is the log of the base survival probability at the target point
    def _at(self, w, fn_isf, fn_q):
        return np.where(w < -0.6931471805599453, fn_isf(np.exp(w)), fn_q(-np.expm1(w)))

    def _w_u(self, u):
        return np.log1p(-np.asarray(u, float)) / self.gamma

    def _w_v(self, v):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(v, float)) / self.gamma

    def quantile(self, u):
        return _ret(self._at(self._w_u(u), self.base.isf, self.base.quantile))

    def isf(self, v):
        return _ret(self._at(self._w_v(v), self.base.isf, self.base.quantile))

    def _dens(self, w):
        f = self._at(w, self.base.density_isf, self.base.density_quantile)
        return _ret(self.gamma * np.exp((self.gamma - 1.0) * w) * f)

    def density_quantile(self, u):
        return self._dens(self._w_u(u))

    def density_isf(self, v):
        return self._dens(self._w_v(v))

    def pdf(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = np.asarray(self.base.pdf(x), float)
            lsf = np.asarray(self.base.logsf(x), float)
            val = self.gamma * np.exp((self.gamma - 1.0) * lsf) * dens
        return _ret(np.where(dens > 0, val, 0.0))


class _PropRevHazard(Distribution):
    def __init__(self, base: Distribution, theta: float):
        self.base, self.theta = base, float(theta)
        self.support = base.support
        self.has_pdf = base.has_pdf
        self.tag = ("prop_rev_hazard", base.tag, self.theta)

    def cdf(self, x):
        return _ret(np.exp(self.theta * np.asarray(self.base.logcdf(x))))

    def sf(self, x):
        return _ret(-np.expm1(self.theta * np.asarray(self.base.logcdf(x))))

    def logcdf(self, x):
        return _ret(self.theta * np.asarray(self.base.logcdf(x)))

    # w is the log of the base CDF at the target point
    def _at(self, w, fn_q, fn_isf):
        return np.where(w < -0.6931471805599453, fn_q(np.exp(w)), fn_isf(-np.expm1(w)))

    def _w_u(self, u):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(u, float)) / self.theta

    def _w_v(self, v):
        return np.log1p(-np.asarray(v, float)) / self.theta

    def quantile(self, u):
        return _ret(self._at(self._w_u(u), self.base.quantile, self.base.isf))

    def isf(self, v):
        return _ret(self._at(self._w_v(v), self.base.quantile, self.base.isf))

    def _dens(self, w):
        f = self._at(w, self.base.density_quantile, self.base.density_isf)
        return _ret(self.theta * np.exp((self.theta - 1.0) * w) * f)

    def density_quantile(self, u):
        return self._dens(self._w_u(u))

    def density_isf(self, v):
        return self._dens(self._w_v(v))

    def pdf(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = np.asarray(self.base.pdf(x), float)
            lcdf = np.asarray(self.base.logcdf(x), float)
            val = self.theta * np.exp((self.theta - 1.0) * lcdf) * dens
        return _ret(np.where(dens > 0, val, 0.0))


def prop_hazard(X: Distribution, gamma: float) -> Distribution:
    """Proportional hazard model: survival function ``F̄(x)^γ``."""
    if not gamma > 0:
        raise DomainError(f"proportional hazard needs γ > 0, got {gamma}")
    if gamma == 1:
        return X
    if isinstance(X, Exponential):
        return Exponential(X.lam * gamma)
    if isinstance(X, _PropHazard):
        return prop_hazard(X.base, X.gamma * gamma)
    if isinstance(X, EmpiricalDiscrete):
        sf = X.tail ** gamma
        cum = 1.0 - sf
        return EmpiricalDiscrete(X.points, np.diff(np.concatenate([[0.0], cum])))
    return _PropHazard(X, gamma)


def prop_rev_hazard(X: Distribution, theta: float) -> Distribution:
    """Proportional reversed hazard model: CDF ``F(x)^θ``."""
    if not theta > 0:
        raise DomainError(f"proportional reversed hazard needs θ > 0, got {theta}")
    if theta == 1:
        return X
    if isinstance(X, Uniform) and X.l == 0.0 and X.r == 1.0:
        return Power(theta)
    if isinstance(X, Power):
        return Power(X.theta * theta)
    if isinstance(X, _PropRevHazard):
        return prop_rev_hazard(X.base, X.theta * theta)
    if isinstance(X, EmpiricalDiscrete):
        cum = X.cum ** theta
        return EmpiricalDiscrete(X.points, np.diff(np.concatenate([[0.0], cum])))
    return _PropRevHazard(X, theta)


class _Equilibrium(Distribution):
    """Density ``F̄(x)/E[X]`` on (0, r); CDF and quantile are numerical."""

    has_pdf = True
    cheap_quantile = False

    def __init__(self, base: Distribution, mean: float, spec: QuadSpec):
        self.base, self._base_mean, self.spec = base, mean, spec
        self.support = SupportInterval(0.0, base.support.r)
        self.tag = ("equilibrium", base.tag)

    def pdf(self, x):
        x = np.asarray(x, float)
        return _ret(np.where(x >= 0, np.asarray(self.base.sf(np.maximum(x, 0.0))) / self._base_mean, 0.0))

    def _area(self, lo, hi):
        return integrate_1d(lambda t: self.base.sf(t), lo, hi, self.spec)[0] / self._base_mean

    def cdf(self, x):
        x = np.asarray(x, float)
        out = np.empty(x.shape)
        for idx, xi in np.ndenumerate(x):
            out[idx] = 0.0 if xi <= 0 else min(1.0, self._area(0.0, min(xi, self.support.r)))
        return _ret(out)

    def sf(self, x):
        x = np.asarray(x, float)
        out = np.empty(x.shape)
        for idx, xi in np.ndenumerate(x):
            out[idx] = 1.0 if xi <= 0 else (
                0.0 if xi >= self.support.r else min(1.0, self._area(xi, self.support.r)))
        return _ret(out)


def equilibrium(X: Distribution, spec: QuadSpec = DEFAULT_QUAD) -> Distribution:
    """Equilibrium (stationary-excess) law with density ``F̄(x)/E[X]``."""
    if X.support.l < 0:
        raise DomainError("equilibrium law needs a nonnegative random variable")
    m = X.mean
    if m is None or not math.isfinite(m) or not m > 0:
        raise DomainError("equilibrium law needs 0 < E[X] < inf")
    if isinstance(X, Exponential):
        return X
    if isinstance(X, EmpiricalDiscrete) and len(X.points) == 1:
        return Uniform(0.0, X.support.l)
    return _Equilibrium(X, m, spec)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def make_family(name: str, *params: float) -> Distribution:
    """Build one of the named families.

    ``bernoulli(p)``, ``uniform(l, r)``, ``power(θ)``, ``exponential(λ)``,
    ``laplace(λ)`` (location 0, scale λ), ``erlang2(λ)``, ``degenerate(c)``.
    """
    key = name.lower()
    try:
        if key == "bernoulli":
            (p,) = params
            if not 0 < p < 1:
                raise DomainError(f"bernoulli needs p in (0, 1), got {p}")
            return EmpiricalDiscrete([0.0, 1.0], [1.0 - p, p], tag=("bernoulli", float(p)))
        if key == "uniform":
            return Uniform(*params)
        if key == "power":
            return Power(*params)
        if key == "exponential":
            return Exponential(*params)
        if key == "laplace":
            if len(params) == 2:
                if params[0] != 0:
                    raise DomainError("laplace is fixed at location 0; shift with affine()")
                params = params[1:]
            return Laplace(*params)
        if key == "erlang2":
            return Erlang2(*params)
        if key == "degenerate":
            (c,) = params
            return EmpiricalDiscrete([c], [1.0], tag=("degenerate", float(c)))
    except TypeError as exc:
        raise DomainError(f"wrong number of parameters for {name}: {params}") from exc
    raise DomainError(f"unknown family {name!r}")


def from_samples(xs: Iterable[float]) -> EmpiricalDiscrete:
    """Empirical law putting mass ``multiplicity / n`` on each distinct sample."""
    arr = np.asarray(list(xs), dtype=float)
    if arr.size == 0:
        raise DomainError("from_samples needs at least one sample")
    pts, counts = np.unique(arr, return_counts=True)
    if len(pts) == 1:
        return EmpiricalDiscrete(pts, [1.0], tag=("degenerate", float(pts[0])))
    return EmpiricalDiscrete(pts, counts / arr.size)


def odds(X: Distribution, x: float) -> float:
    """Odds function ``F̄(x)/F(x)`` on the open support."""
    F = float(X.cdf(x))
    S = float(X.sf(x))
    if not (X.support.l < x < X.support.r) or F <= 0 or S <= 0:
        raise DomainError(f"odds needs x inside the open support, got {x}")
    return S / F


_ALIASES = {
    "exp": "exponential", "unif": "uniform", "bern": "bernoulli",
    "deg": "degenerate", "pow": "power",
}


def parse_spec(text: str) -> Distribution:
    """Parse CLI strings such as ``exp:1.5``, ``unif:0:1`` or ``emp:@data.csv``."""
    head, _, rest = text.partition(":")
    head = _ALIASES.get(head.lower(), head.lower())
    if head in ("emp", "empirical"):
        if not rest.startswith("@"):
            raise DomainError("empirical spec must look like emp:@file.csv")
        lines = Path(rest[1:]).read_text().split()
        return from_samples(float(v) for v in lines if v.strip())
    try:
        params = [float(p) for p in rest.split(":")] if rest else []
    except ValueError as exc:
        raise DomainError(f"bad distribution spec {text!r}") from exc
    return make_family(head, *params)
