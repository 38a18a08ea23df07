"""Order statistics, k-out-of-n systems and multi-component stress-strength reliability."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special

from .cigf import MeasureReport, Method, ParamPair, cigf, h_measure, k_measure
from .distributions import Distribution, EmpiricalDiscrete, SupportInterval, make_family
from .numerics import (
    DEFAULT_QUAD,
    DomainError,
    QuadSpec,
    alternating_series,
    gen_binomial,
    integrate_1d,
)

__all__ = [
    "MonteCarloConfig",
    "SystemSpec",
    "cigf_max_series",
    "cigf_min_series",
    "figure1_data",
    "korn_mean",
    "order_statistic_mean_mc",
    "rkn_general",
    "rkn_monte_carlo",
    "rkn_monte_carlo_all",
    "rkn_power_closed",
    "rkn_recurrence",
    "rkn_uniform_stress",
    "run_streams",
]


@dataclass(frozen=True)
class SystemSpec:
    """``n`` i.i.d. strengths, survival threshold ``k``, common independent stress."""

    n: int
    k: int
    strength: Distribution
    stress: Distribution

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if int(self.k) != self.k or not 0 <= self.k <= self.n:
            raise DomainError(f"k must be an integer in [0, n], got {self.k}")


@dataclass(frozen=True)
class MonteCarloConfig:
    n_trials: int = 1_000_000
    seed: int = 0
    n_streams: int = 4

    def __post_init__(self):
        if self.n_trials < 1 or self.n_streams < 1:
            raise DomainError("n_trials and n_streams must be positive")


def run_streams(mc: MonteCarloConfig, work, chunk: int = 200_000) -> list:
    """Split ``mc.n_trials`` across independent substreams and run them concurrently.

    ``work(rng, n)`` returns an additive result for ``n`` trials.  Each stream
    gets a child of ``SeedSequence(mc.seed)`` and processes its share in
    chunks; the per-stream results come back in stream order.
    """
    children = np.random.SeedSequence(mc.seed).spawn(mc.n_streams)
    base, extra = divmod(mc.n_trials, mc.n_streams)
    shares = [base + (i < extra) for i in range(mc.n_streams)]

    def run(i: int):
        rng = np.random.default_rng(children[i])
        total, left = None, shares[i]
        while left > 0:
            m = min(chunk, left)
            part = work(rng, m)
            total = part if total is None else total + part
            left -= m
        return total

    with ThreadPoolExecutor(max_workers=mc.n_streams) as pool:
        return list(pool.map(run, range(mc.n_streams)))


# ---------------------------------------------------------------------------
# order statistics
# ---------------------------------------------------------------------------


def _series(term, spec: QuadSpec, label: str) -> MeasureReport:
    value, err, used = alternating_series(term, spec)
    return MeasureReport(value, err, Method.SERIES, {"terms": used, "series": label})


def cigf_max_series(X: Distribution, n: int, p, spec: QuadSpec = DEFAULT_QUAD) -> MeasureReport:
    """``G`` of the sample maximum as ``Σ_i (-1)^i C(β,i) H_X(n(i+α))``."""
    p = ParamPair.coerce(p)

    def term(i: int) -> float:
        c = gen_binomial(p.beta, i)
        return 0.0 if c == 0 else (-1) ** i * c * h_measure(X, n * (i + p.alpha), spec).value

    return _series(term, spec, "max")


def cigf_min_series(X: Distribution, n: int, p, spec: QuadSpec = DEFAULT_QUAD) -> MeasureReport:
    """``G`` of the sample minimum as ``Σ_j (-1)^j C(α,j) K_X(n(j+β))``."""
    p = ParamPair.coerce(p)

    def term(j: int) -> float:
        c = gen_binomial(p.alpha, j)
        return 0.0 if c == 0 else (-1) ** j * c * k_measure(X, n * (j + p.beta), spec).value

    return _series(term, spec, "min")


def korn_mean(X: Distribution, k: int, n: int, spec: QuadSpec = DEFAULT_QUAD) -> MeasureReport:
    """Mean of the ``k``-th order statistic: ``l + Σ_{j<k} C(n,j) G_X(j, n-j)``.

    The sum integrates ``P(X_(k:n) > x)`` over the support, so the lower
    endpoint ``l`` (zero for lifetimes) is added back.
    """
    if not 1 <= k <= n:
        raise DomainError(f"korn_mean needs 1 <= k <= n, got k={k}, n={n}")
    if not math.isfinite(X.support.l):
        raise DomainError("korn_mean needs a finite lower endpoint")
    total, err, methods = 0.0, 0.0, set()
    for j in range(k):
        g = cigf(X, (j, n - j), spec)
        c = math.comb(n, j)
        total += c * g.value
        err += c * g.err_est
        methods.add(g.method)
    method = methods.pop() if len(methods) == 1 else Method.QUADRATURE
    return MeasureReport(X.support.l + total, err, method, {"k": k, "n": n})


def order_statistic_mean_mc(X: Distribution, k: int, n: int, mc: MonteCarloConfig) -> MeasureReport:
    """Brute-force mean of the ``k``-th smallest of ``n`` draws (3σ error)."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")

    def work(rng, m):
        xs = X.sample((m, n), rng)
        kth = np.partition(xs, k - 1, axis=1)[:, k - 1]
        return np.array([kth.sum(), (kth ** 2).sum()])

    s, s2 = np.sum(run_streams(mc, work), axis=0)
    N = mc.n_trials
    mean = s / N
    var = max(s2 / N - mean ** 2, 0.0) * N / max(N - 1, 1)
    return MeasureReport(mean, 3 * math.sqrt(var / N), Method.MONTE_CARLO,
                         {"n_trials": N, "seed": mc.seed, "n_streams": mc.n_streams})


# ---------------------------------------------------------------------------
# stress-strength reliability
# ---------------------------------------------------------------------------


def _at_least_k(k: int, n: int, F, S):
    """``P(Bin(n, F̄) >= k) = Σ_{j>=k} C(n,j) F̄^j F^{n-j}`` with both tails precise."""
    F = np.asarray(F, float)
    S = np.asarray(S, float)
    with np.errstate(all="ignore"):
        lo = special.betainc(k, n - k + 1, np.clip(S, 0.0, 1.0))
        hi = special.betaincc(n - k + 1, k, np.clip(F, 0.0, 1.0))
    return np.where(S < 0.5, lo, hi)


def rkn_general(sys: SystemSpec, spec: QuadSpec = DEFAULT_QUAD) -> MeasureReport:
    """``R_{k,n} = Σ_{j=k}^n C(n,j) ∫ F̄^j F^{n-j} dF_T``.

    Continuous stress is integrated in its probability scale; discrete
    stress is summed over its atoms.
    """
    X, T, n, k = sys.strength, sys.stress, sys.n, sys.k
    if k == 0:
        return MeasureReport(1.0, 0.0, Method.CLOSED_FORM, {"k": 0, "n": n})

    def psi(t):
        return _at_least_k(k, n, X.cdf(t), X.sf(t))

    if isinstance(T, EmpiricalDiscrete):
        v = float(np.dot(T.probs, psi(T.points)))
        return MeasureReport(v, 4 * np.finfo(float).eps, Method.CLOSED_FORM, {"k": k, "n": n})
    if not T.has_pdf:
        raise DomainError("stress must be absolutely continuous or finitely supported")
    # jumps of ψ where the strength law has atoms
    jumps = []
    if isinstance(X, EmpiricalDiscrete):
        jumps = [float(T.cdf(x)) for x in X.points]
    pts_lo = sorted(u for u in jumps if 0 < u < 0.5)
    pts_hi = sorted(1 - u for u in jumps if 0.5 < u < 1)
    v1, e1 = integrate_1d(lambda u: psi(T.quantile(u)), 0.0, 0.5, spec, pts_lo)
    v2, e2 = integrate_1d(lambda v: psi(T.isf(v)), 0.0, 0.5, spec, pts_hi)
    return MeasureReport(v1 + v2, e1 + e2, Method.QUADRATURE, {"k": k, "n": n})


def _check_common_support(X: Distribution, l: float, r: float):
    if not (math.isfinite(l) and math.isfinite(r) and l < r):
        raise DomainError(f"uniform stress needs a finite interval, got ({l}, {r})")
    if not X.support.close_to(SupportInterval(l, r)):
        raise DomainError(f"strength support {X.support} differs from stress support ({l}, {r})")


def _uniform_stress_terms(X: Distribution, n: int, l: float, r: float, spec: QuadSpec):
    return [math.comb(n, j) * cigf(X, (n - j, j), spec).value / (r - l) for j in range(n + 1)]


def rkn_uniform_stress(X: Distribution, k: int, n: int, l: float, r: float,
                       spec: QuadSpec = DEFAULT_QUAD) -> MeasureReport:
    """``R_{k,n} = (1/(r-l)) Σ_{j=k}^n C(n,j) G_X(n-j, j)`` for Unif(l, r) stress."""
    SystemSpec(n, k, X, X)          # validates k, n
    _check_common_support(X, l, r)
    if k == 0:
        return MeasureReport(1.0, 0.0, Method.CLOSED_FORM, {"k": 0, "n": n})
    terms = _uniform_stress_terms(X, n, l, r, spec)[k:]
    return MeasureReport(math.fsum(terms), 1e-15 * max(1.0, sum(terms)) * (n + 1),
                         Method.CLOSED_FORM if X.tag[0] in ("uniform", "power") else Method.QUADRATURE,
                         {"k": k, "n": n})


def rkn_recurrence(X: Distribution, n: int, l: float, r: float,
                   spec: QuadSpec = DEFAULT_QUAD) -> list[float]:
    """``R_{0,n}, ..., R_{n,n}`` from ``R_{k+1,n} = R_{k,n} - C(n,k) G_X(n-k, k)/(r-l)``."""
    _check_common_support(X, l, r)
    terms = _uniform_stress_terms(X, n, l, r, spec)
    out = [1.0]
    for k in range(n):
        out.append(out[-1] - terms[k])
    return out


def rkn_power_closed(theta: float, k: int, n: int) -> float:
    """``Γ(n+1) Γ(n-k+1+1/θ) / (Γ(n+1+1/θ) Γ(n-k+1))`` for Power(θ) strengths.

    Evaluated as the finite product ``Π_{j<k} (n-j)/(n-j+1/θ)``, which needs
    no cancellation of large log-gamma values.
    """
    if not theta > 0:
        raise DomainError(f"θ must be positive, got {theta}")
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    c = 1.0 / theta
    out = 1.0
    for j in range(k):
        out *= (n - j) / (n - j + c)
    return out


def rkn_monte_carlo(sys: SystemSpec, mc: MonteCarloConfig) -> MeasureReport:
    """Fraction of trials in which at least ``k`` of ``n`` strengths exceed the stress."""
    meta = {"n_trials": mc.n_trials, "seed": mc.seed, "n_streams": mc.n_streams}
    if sys.k == 0:
        return MeasureReport(1.0, 0.0, Method.MONTE_CARLO, meta)

    def work(rng, m):
        xs = sys.strength.sample((m, sys.n), rng)
        ts = sys.stress.sample((m, 1), rng)
        return int(np.count_nonzero((xs > ts).sum(axis=1) >= sys.k))

    hits = sum(run_streams(mc, work))
    R = hits / mc.n_trials
    return MeasureReport(R, 3 * math.sqrt(R * (1 - R) / mc.n_trials), Method.MONTE_CARLO, meta)


def rkn_monte_carlo_all(strength: Distribution, stress: Distribution, n: int,
                        mc: MonteCarloConfig) -> list[MeasureReport]:
    """``R_{0,n}, ..., R_{n,n}`` from one batch of trials (tail counts of exceedances)."""
    SystemSpec(n, 0, strength, stress)
    meta = {"n_trials": mc.n_trials, "seed": mc.seed, "n_streams": mc.n_streams}

    def work(rng, m):
        xs = strength.sample((m, n), rng)
        ts = stress.sample((m, 1), rng)
        return np.bincount((xs > ts).sum(axis=1), minlength=n + 1)

    counts = np.sum(run_streams(mc, work), axis=0)
    tail = np.cumsum(counts[::-1])[::-1] / mc.n_trials
    out = []
    for R in tail:
        R = float(R)
        out.append(MeasureReport(R, 3 * math.sqrt(R * (1 - R) / mc.n_trials), Method.MONTE_CARLO, meta))
    return out


def figure1_data(thetas=(0.1, 0.5, 1.0, 2.0, 10.0), n: int = 50, method: str = "closed",
                 spec: QuadSpec = DEFAULT_QUAD, mc: MonteCarloConfig | None = None
                 ) -> list[tuple[float, int, float]]:
    """Rows ``(θ, k, R_{k,n})`` for Power(θ) strengths under Unif(0,1) stress."""
    rows = []
    for th in thetas:
        X = make_family("power", th)
        if method == "closed":
            vals = [rkn_power_closed(th, k, n) for k in range(n + 1)]
        elif method == "sum":
            vals = [rkn_uniform_stress(X, k, n, 0.0, 1.0, spec).value for k in range(n + 1)]
        elif method == "recurrence":
            vals = rkn_recurrence(X, n, 0.0, 1.0, spec)
        elif method == "general":
            T = make_family("uniform", 0.0, 1.0)
            vals = [rkn_general(SystemSpec(n, k, X, T), spec).value for k in range(n + 1)]
        elif method == "mc":
            mc = mc or MonteCarloConfig()
            T = make_family("uniform", 0.0, 1.0)
            vals = [r.value for r in rkn_monte_carlo_all(X, T, n, mc)]
        else:
            raise DomainError(f"unknown method {method!r}")
        rows.extend((th, k, v) for k, v in enumerate(vals))
    return rows
