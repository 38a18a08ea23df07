"""Numerical building blocks shared by every other module.

Special functions, adaptive 1D/2D quadrature, slowly decaying series,
central finite differences and a right-sided Caputo derivative.

The quadrature engine is a globally adaptive bisection scheme.  Panels that
touch an endpoint of the original interval (or a user breakpoint) are
integrated with a tanh-sinh rule, which tolerates algebraic and logarithmic
endpoint singularities; interior panels use a 7/15 Gauss-Kronrod pair.
Integrands are called with numpy arrays of abscissae.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import special

__all__ = [
    "AccuracyError",
    "DomainError",
    "FracDiffSpec",
    "QuadSpec",
    "Region",
    "alternating_series",
    "beta",
    "caputo_deriv",
    "central_diff",
    "gen_binomial",
    "incomplete_beta",
    "integrate_1d",
    "integrate_2d",
    "log_gamma",
    "upper_incomplete_gamma",
]


class DomainError(ValueError):
    """An argument lies outside the region where a quantity is defined."""


class AccuracyError(ArithmeticError):
    """A numerical budget ran out before the requested accuracy was met.

    The best available estimate is kept on ``estimate`` / ``err_est``.
    """

    def __init__(self, message: str, estimate: float = math.nan, err_est: float = math.inf):
        super().__init__(message)
        self.estimate = estimate
        self.err_est = err_est


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and budgets for quadrature and series evaluation.

    ``tail_mass`` is the probability allowed outside a truncated window on
    infinite supports (only used where a window is needed, e.g. 2D grids);
    it must lie in (0, 1e-6).
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdiv: int = 2000
    tail_mass: float = 1e-12
    series_terms_max: int = 10000
    series_tail_tol: float = 1e-12

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise DomainError("abs_tol and rel_tol must be positive")
        if not 0 < self.tail_mass < 1e-6:
            raise DomainError("tail_mass must lie in (0, 1e-6)")
        if self.max_subdiv < 1 or self.series_terms_max < 1:
            raise DomainError("max_subdiv and series_terms_max must be >= 1")
        if not self.series_tail_tol > 0:
            raise DomainError("series_tail_tol must be positive")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def replace(self, **changes) -> "QuadSpec":
        return dataclasses.replace(self, **changes)


DEFAULT_QUAD = QuadSpec()


@dataclass(frozen=True)
class FracDiffSpec:
    """Order and discretisation of a right-sided Caputo derivative.

    ``upper_cutoff`` truncates the infinite upper limit (``inf`` keeps it and
    the tail is integrated after a compactifying substitution).  When
    ``inner_step`` is None a step suited to the derivative order is used.
    """

    order: float
    upper_cutoff: float = math.inf
    inner_step: float | None = None

    def __post_init__(self):
        if not self.order > 0:
            raise DomainError("fractional order must be positive")

    @property
    def n(self) -> int:
        return math.floor(self.order) + 1

    def step(self) -> float:
        if self.inner_step is not None:
            return self.inner_step
        return {1: 1e-4, 2: 2e-3}.get(self.n, 1e-2)


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------


def log_gamma(x: float) -> float:
    """``ln Γ(x)`` for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def beta(x: float, y: float) -> float:
    """Euler Beta function ``Γ(x)Γ(y)/Γ(x+y)``."""
    if not (x > 0 and y > 0):
        raise DomainError(f"beta needs positive arguments, got ({x}, {y})")
    return float(special.beta(x, y))


def incomplete_beta(p: float, x: float, y: float) -> float:
    """Non-regularised incomplete Beta ``∫_0^p t^(x-1) (1-t)^(y-1) dt``."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"incomplete_beta needs p in [0, 1], got {p}")
    if not (x > 0 and y > 0):
        raise DomainError(f"incomplete_beta needs x, y > 0, got ({x}, {y})")
    if p == 0.0:
        return 0.0
    return float(special.betainc(x, y, p) * special.beta(x, y))


def upper_incomplete_gamma(a: float, x: float) -> float:
    """``Γ(a, x) = ∫_x^∞ t^(a-1) e^(-t) dt``."""
    if not a > 0:
        raise DomainError(f"upper_incomplete_gamma needs a > 0, got {a}")
    if x < 0:
        raise DomainError(f"upper_incomplete_gamma needs x >= 0, got {x}")
    return float(special.gammaincc(a, x) * special.gamma(a))


def log_upper_incomplete_gamma(a: float, x: float) -> float:
    """``ln Γ(a, x)``; stays finite where ``Γ(a, x)`` itself overflows."""
    if not a > 0:
        raise DomainError(f"log_upper_incomplete_gamma needs a > 0, got {a}")
    if x < 0:
        raise DomainError(f"log_upper_incomplete_gamma needs x >= 0, got {x}")
    q = special.gammaincc(a, x)
    if q > 0:
        return math.log(q) + math.lgamma(a)
    # deep tail: Γ(a,x) ~ x^(a-1) e^(-x) / (1 - (a-1)/x)
    return (a - 1) * math.log(x) - x - math.log1p(-(a - 1) / x)


def gen_binomial(a: float, n: int) -> float:
    """Generalised binomial coefficient ``a(a-1)...(a-n+1)/n!``.

    Built by the multiplicative recurrence so that the sign is preserved and
    integer ``a`` with ``0 <= a < n`` gives an exact zero.
    """
    if n < 0:
        raise DomainError("gen_binomial needs n >= 0")
    out = 1.0
    for k in range(n):
        out *= (a - k) / (k + 1)
        if out == 0.0:
            break
    return out


# ---------------------------------------------------------------------------
# 1D quadrature
# ---------------------------------------------------------------------------

_GK_X = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_GK_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_GK_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_GK_NODES = np.concatenate([-_GK_X[:-1], _GK_X[::-1]])
_GK_WEIGHTS_K = np.concatenate([_GK_WK[:-1], _GK_WK[::-1]])
# Gauss points are the odd-indexed Kronrod abscissae
_GK_WEIGHTS_G = np.zeros(15)
_GK_WEIGHTS_G[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_GK_WG[:-1], _GK_WG[::-1]])

_TS_TMAX = 6.0
_TS_MAX_LEVEL = 7


@lru_cache(maxsize=None)
def _ts_level(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """New tanh-sinh nodes at ``level`` as (left fraction, right fraction, weight).

    Fractions are distances to the left/right end in units of the panel width,
    each computed without cancellation.
    """
    h = 2.0 ** -level
    if level == 0:
        t = np.arange(-_TS_TMAX, _TS_TMAX + 0.5)
    else:
        k = np.arange(1, int(round(2 * _TS_TMAX / h)) + 1, 2)
        t = -_TS_TMAX + k * h
    s = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(s))
    near = e / (1.0 + e)
    far = 1.0 / (1.0 + e)
    left = np.where(s < 0, near, far)
    right = np.where(s < 0, far, near)
    w = 0.5 * math.pi * np.cosh(t) * 2.0 * e / (1.0 + e) ** 2
    left.setflags(write=False)
    right.setflags(write=False)
    w.setflags(write=False)
    return left, right, w


def _evaluate(f, x: np.ndarray, d: np.ndarray | None = None) -> np.ndarray:
    y = np.asarray(f(x) if d is None else f(x, d), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise DomainError(f"integrand is not finite at x={bad!r}")
    return y


def _gk15(f, a: float, b: float, gap: float | None) -> tuple[float, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    d = None if gap is None else gap + half * (1.0 - _GK_NODES)
    y = _evaluate(f, mid + half * _GK_NODES, d)
    k = half * float(np.dot(_GK_WEIGHTS_K, y))
    g = half * float(np.dot(_GK_WEIGHTS_G, y))
    err = abs(k - g)
    # QUADPACK-style rescaling of the raw difference
    resasc = half * float(np.dot(_GK_WEIGHTS_K, np.abs(y - k / (b - a))))
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    return k, max(err, 50 * np.finfo(float).eps * abs(k))


def _tanh_sinh(f, a: float, b: float, abs_target: float, rel_tol: float,
               gap: float | None) -> tuple[float, float]:
    width = b - a
    total = 0.0
    prev = math.nan
    err = math.inf
    for level in range(_TS_MAX_LEVEL + 1):
        left, right, w = _ts_level(level)
        x = np.where(left <= right, a + width * left, b - width * right)
        # a node that rounds onto b is still usable when its distance is known
        keep = (x > a) & ((x < b) | (gap is not None)) & (right > 0) & (w > 0)
        part = 0.0
        if np.any(keep):
            d = None if gap is None else gap + width * right[keep]
            y = _evaluate(f, x[keep], d)
            part = float(np.dot(w[keep], y))
        h = 2.0 ** -level
        total = total * 0.5 + h * part if level else h * part
        value = width * total
        if level >= 3:
            err = abs(value - prev)
            if err <= max(abs_target, rel_tol * abs(value)):
                break
        prev = value
    return value, err


def _map_infinite(f, lo: float, hi: float, points: Sequence[float]):
    """Rewrite an integral with infinite limits over a finite interval."""
    if math.isfinite(lo) and math.isfinite(hi):
        return [(f, lo, hi, sorted(p for p in points if lo < p < hi))]
    if math.isinf(lo) and math.isinf(hi):
        return (_map_infinite(f, -math.inf, 0.0, [p for p in points if p < 0])
                + _map_infinite(f, 0.0, math.inf, [p for p in points if p > 0]))
    if math.isinf(hi):
        def g(t, f=f, lo=lo):
            return f(lo + t / (1.0 - t)) / (1.0 - t) ** 2
        tp = [(p - lo) / (1.0 + p - lo) for p in points if p > lo]
    else:
        def g(t, f=f, hi=hi):
            return f(hi - t / (1.0 - t)) / (1.0 - t) ** 2
        tp = [(hi - p) / (1.0 + hi - p) for p in points if p < hi]
    return [(g, 0.0, 1.0, sorted(tp))]


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    spec: QuadSpec = DEFAULT_QUAD,
    points: Sequence[float] = (),
    *,
    complement: bool = False,
) -> tuple[float, float]:
    """Adaptive quadrature of ``f`` over ``[lo, hi]``.

    Parameters
    ----------
    f : callable
        Vectorised integrand; receives a 1-D float array.
    lo, hi : float
        Limits, either may be infinite.
    spec : QuadSpec
        Tolerances and subdivision budget.
    points : sequence of float
        Interior breakpoints (kinks, singularities); panels meeting them are
        treated like endpoint panels.
    complement : bool
        Call ``f(x, hi - x)`` with the distance to the upper limit computed
        without cancellation, for integrands singular at a finite ``hi``.

    Returns
    -------
    (value, err_est)

    Raises
    ------
    AccuracyError
        If ``max_subdiv`` bisections do not reach
        ``max(abs_tol, rel_tol * |value|)``.  The exception carries the best
        estimate.
    DomainError
        For reversed limits or a non-finite integrand value.
    """
    if math.isnan(lo) or math.isnan(hi):
        raise DomainError("integration limits must not be NaN")
    if lo == hi:
        return 0.0, 0.0
    if lo > hi:
        raise DomainError(f"integrate_1d needs lo < hi, got ({lo}, {hi})")

    if complement and math.isinf(hi):
        raise DomainError("complement mode needs a finite upper limit")
    pieces = _map_infinite(f, lo, hi, points)
    top = hi if complement else None
    # panel: [integrand, a, b, value, err, anchored]
    panels = []
    for g, a, b, pts in pieces:
        edges = [a, *pts, b]
        for x0, x1 in zip(edges[:-1], edges[1:]):
            if x1 > x0:
                panels.append([g, x0, x1, 0.0, math.inf, (True, True)])
    span = sum(p[2] - p[1] for p in panels)
    for p in panels:
        _eval_panel(p, spec, span, 0.0, top)

    n_subdiv = 0
    while True:
        value = sum(p[3] for p in panels)
        err = sum(p[4] for p in panels)
        if err <= spec.tolerance(value):
            return value, err
        if n_subdiv >= spec.max_subdiv:
            raise AccuracyError(
                f"quadrature did not converge after {n_subdiv} subdivisions "
                f"(estimate {value!r}, error {err!r})", value, err)
        worst = max(range(len(panels)), key=lambda i: panels[i][4])
        g, a, b, _, _, (left_anchor, right_anchor) = panels[worst]
        m = 0.5 * (a + b)
        if not a < m < b:
            raise AccuracyError("panel cannot be bisected further", value, err)
        first = [g, a, m, 0.0, math.inf, (left_anchor, False)]
        second = [g, m, b, 0.0, math.inf, (False, right_anchor)]
        _eval_panel(first, spec, span, value, top)
        _eval_panel(second, spec, span, value, top)
        panels[worst:worst + 1] = [first, second]
        n_subdiv += 1


def _eval_panel(panel, spec: QuadSpec, span: float, running: float,
                top: float | None) -> None:
    g, a, b, _, _, anchored = panel
    gap = None if top is None else top - b
    if any(anchored):
        frac = (b - a) / span
        abs_target = 0.25 * max(spec.abs_tol * frac, spec.rel_tol * abs(running) * frac)
        value, err = _tanh_sinh(g, a, b, max(abs_target, 1e-300), 0.25 * spec.rel_tol, gap)
    else:
        value, err = _gk15(g, a, b, gap)
    panel[3] = value
    panel[4] = err


# ---------------------------------------------------------------------------
# 2D quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Integration region ``{x_lo < x < x_hi, y_lo(x) < y < y_hi(x)}``.

    ``y_lo`` / ``y_hi`` are constants or callables of ``x``; ``y_points``
    optionally returns inner breakpoints for a given ``x``.
    """

    x_lo: float
    x_hi: float
    y_lo: float | Callable[[float], float]
    y_hi: float | Callable[[float], float]
    x_points: tuple[float, ...] = ()
    y_points: Callable[[float], Sequence[float]] | None = None

    @classmethod
    def rectangle(cls, x0: float, x1: float, y0: float, y1: float, **kw) -> "Region":
        return cls(x0, x1, y0, y1, **kw)

    @classmethod
    def simplex(cls, size: float = 1.0) -> "Region":
        """Triangle ``x, y >= 0, x + y <= size``."""
        return cls(0.0, size, 0.0, lambda x: max(size - x, 0.0))

    def y_limits(self, x: float) -> tuple[float, float]:
        lo = self.y_lo(x) if callable(self.y_lo) else self.y_lo
        hi = self.y_hi(x) if callable(self.y_hi) else self.y_hi
        return lo, hi


def integrate_2d(
    f: Callable[[float, np.ndarray], np.ndarray],
    region: Region,
    spec: QuadSpec = DEFAULT_QUAD,
) -> tuple[float, float]:
    """Nested adaptive quadrature of ``f(x, y)`` over ``region``.

    The inner integral runs over ``y`` for each outer abscissa ``x``; ``f``
    receives a scalar ``x`` and an array of ``y``.  The error estimate adds
    the outer error to the largest inner error times the outer extent.
    """
    inner_errs = [0.0]

    def outer(xs: np.ndarray) -> np.ndarray:
        out = np.empty_like(xs)
        for i, x in enumerate(xs):
            y0, y1 = region.y_limits(float(x))
            if not y1 > y0:
                out[i] = 0.0
                continue
            pts = region.y_points(float(x)) if region.y_points else ()
            v, e = integrate_1d(lambda y, x=float(x): f(x, y), y0, y1, spec, pts)
            out[i] = v
            inner_errs[0] = max(inner_errs[0], e)
        return out

    value, err = integrate_1d(outer, region.x_lo, region.x_hi, spec, region.x_points)
    extent = region.x_hi - region.x_lo
    if not math.isfinite(extent):
        extent = 1.0
    return value, err + inner_errs[0] * extent


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


def alternating_series(
    term: Callable[[int], float],
    spec: QuadSpec = DEFAULT_QUAD,
    start: int = 0,
) -> tuple[float, float, int]:
    """Sum ``term(start) + term(start+1) + ...`` for eventually decaying terms.

    Summation stops at the first term (after the first) whose magnitude is at
    most ``series_tail_tol * max(1, |partial sum|)``; that omitted term is the
    reported error.  When the trailing terms share a sign and decay like a
    power, the error also includes an integral-test estimate of the tail.

    Returns
    -------
    (value, err_est, n_used)
    """
    total = 0.0
    history: list[float] = []
    for i in range(start, start + spec.series_terms_max):
        t = float(term(i))
        if not math.isfinite(t):
            raise AccuracyError(f"series term {i} is not finite", total, math.inf)
        if i > start and abs(t) <= spec.series_tail_tol * max(1.0, abs(total)):
            return total, abs(t) + _power_tail(history, i), i - start
        total += t
        history.append(t)
        if len(history) > 8:
            history.pop(0)
    raise AccuracyError(
        f"series did not reach tail tolerance within {spec.series_terms_max} terms",
        total, abs(history[-1]) + _power_tail(history, start + spec.series_terms_max))


def _power_tail(history: list[float], next_index: int) -> float:
    """Tail bound for same-signed terms decaying like ``i^-p``, p > 1."""
    if len(history) < 4 or next_index < 8:
        return 0.0
    a, b = history[-4], history[-1]
    if a == 0 or b == 0 or (a > 0) != (b > 0) or any(
            (h > 0) != (a > 0) for h in history[-4:]):
        return 0.0
    ratio = abs(b / a)
    if ratio >= 1:
        return math.inf
    i1, i0 = next_index - 1, next_index - 4
    p = -math.log(ratio) / math.log(i1 / i0)
    if p <= 1:
        return math.inf
    return abs(b) * i1 / (p - 1)


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------

_STENCILS = {
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def central_diff(
    g: Callable[[float], float],
    at: float,
    order: int,
    step: float,
    *,
    richardson: bool = False,
    domain: tuple[float, float] | None = None,
) -> float:
    """Central finite-difference estimate of the ``order``-th derivative.

    Second-order accurate; with ``richardson`` the estimates at ``step`` and
    ``step/2`` are combined to fourth order.  ``domain`` (open interval) is
    checked against the stencil before any evaluation.
    """
    if order not in _STENCILS:
        raise DomainError(f"central_diff supports orders 1-4, got {order}")
    if not step > 0:
        raise DomainError("step must be positive")
    reach = max(abs(k) for k, _ in _STENCILS[order]) * step
    if domain is not None and not (domain[0] < at - reach and at + reach < domain[1]):
        raise DomainError(
            f"stencil [{at - reach}, {at + reach}] leaves the domain {domain}")

    def estimate(h: float) -> float:
        return sum(c * g(at + k * h) for k, c in _STENCILS[order]) / h ** order

    coarse = estimate(step)
    if not richardson:
        return coarse
    fine = estimate(0.5 * step)
    return (4.0 * fine - coarse) / 3.0


def caputo_deriv(
    g: Callable[[float], float],
    at: float,
    spec: FracDiffSpec,
    quad: QuadSpec = DEFAULT_QUAD,
    *,
    domain: tuple[float, float] | None = None,
) -> float:
    """Right-sided Caputo derivative of non-integer order ``ν``::

        (-1)^n / Γ(n-ν) ∫_at^cutoff g^(n)(t) (t - at)^(n-ν-1) dt,   n = ⌊ν⌋ + 1

    ``g^(n)`` is a Richardson-refined central difference whose step grows
    with ``|t|``.  The weakly
    singular kernel is handled by subtracting ``g^(n)(at)`` on ``[at, at+c]``
    and adding its exact contribution ``g^(n)(at) c^(n-ν) / (n-ν)``, which
    keeps the rule stable as ``ν`` approaches an integer from below.  The
    outer quadrature runs at a tolerance suited to difference-quotient noise.
    """
    nu = spec.order
    if float(nu).is_integer():
        raise DomainError(f"caputo_deriv needs a non-integer order, got {nu}")
    n = spec.n
    p = n - nu
    h = spec.step()
    cutoff = spec.upper_cutoff
    if not cutoff > at:
        raise DomainError("upper_cutoff must exceed the evaluation point")

    # relative step: keeps rounding noise below the signal for slowly decaying g
    def dn(t: float) -> float:
        return central_diff(g, t, n, h * max(1.0, abs(t)), richardson=True, domain=domain)

    d0 = dn(at)
    c = min(1.0, cutoff - at)
    outer = quad.replace(abs_tol=max(quad.abs_tol, 1e-8), rel_tol=max(quad.rel_tol, 1e-7))

    # below this shift the difference quotient is pure noise; its limit is 0
    tiny = 1e-9 * max(1.0, abs(at))

    def near(s: np.ndarray) -> np.ndarray:
        return np.array([(dn(at + si) - d0) * si ** (p - 1) if si > tiny else 0.0
                         for si in s])

    def far(s: np.ndarray) -> np.ndarray:
        return np.array([dn(at + si) * si ** (p - 1) for si in s])

    v_near, _ = integrate_1d(near, 0.0, c, outer)
    v_far = 0.0
    if cutoff - at > c:
        v_far, _ = integrate_1d(far, c, cutoff - at, outer)
    total = (v_near + v_far) / math.gamma(p) + d0 * c ** p / math.gamma(p + 1)
    return (-1) ** n * total
