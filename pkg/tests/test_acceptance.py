"""Acceptance criteria 1-10.

Each test computes its criterion from scratch, prints one ``PASS``/``FAIL``
line with the measured runtime, then asserts both the numerical condition and
the runtime limit.
"""

import io
import math
import time

import numpy as np
import pytest

from cigfkit import bivariate as bv
from cigfkit import cli
from cigfkit import entropy as ent
from cigfkit import verify
from cigfkit.bounds import chernoff_grid_infimum, erlang_chernoff_infimum, holder_bound, verify_bounds
from cigfkit.cigf import Membership, cigf, cigf_erlang_series, closed_form, in_domain
from cigfkit.distributions import make_family, prop_hazard, prop_rev_hazard
from cigfkit.gini import (
    Dispersive,
    DistortionPair,
    dispersive_check,
    gini_mean_difference_mc,
    mean_value_repr,
    q_gini,
    rkn_comparison,
    variability_axioms_check,
    weighted_q_gini,
)
from cigfkit.numerics import DomainError
from cigfkit.reliability import (
    MonteCarloConfig,
    SystemSpec,
    cigf_max_series,
    cigf_min_series,
    figure1_data,
    korn_mean,
    order_statistic_mean_mc,
    rkn_general,
    rkn_monte_carlo,
    rkn_monte_carlo_all,
    rkn_power_closed,
    rkn_recurrence,
    rkn_uniform_stress,
)

SEED = 20240601
GRID = [(a, b) for a in (0.5, 1.0, 2.0) for b in (0.5, 1.0, 2.0)]
U = make_family("uniform", 0.0, 1.0)
E1 = make_family("exponential", 1.0)


class Criterion:
    """Collects failures and timing for one criterion and prints its verdict."""

    def __init__(self, capsys, number, title, limit):
        self.capsys, self.number, self.title, self.limit = capsys, number, title, limit
        self.failures = []
        self.notes = []

    def check(self, ok, what):
        if not ok:
            self.failures.append(what)

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        secs = time.perf_counter() - self.t0
        if exc_type is not None:
            self.failures.append(f"raised {exc_type.__name__}: {exc}")
        if secs > self.limit:
            self.failures.append(f"runtime {secs:.1f} s over the {self.limit} s limit")
        verdict = "PASS" if not self.failures else "FAIL"
        with self.capsys.disabled():
            print(f"\n[criterion {self.number}] {verdict} {self.title} ({secs:.2f} s, limit {self.limit} s)")
            for n in self.notes:
                print(f"    note: {n}")
            for f in self.failures[:10]:
                print(f"    failed: {f}")
        assert not self.failures, "; ".join(self.failures[:10])
        return False


def rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_01_table2_oracles(capsys):
    fams = [("uniform", 0.0, 1.0), ("uniform", -1.0, 2.0), ("power", 0.5), ("power", 2.0),
            ("exponential", 1.0), ("exponential", 2.5), ("laplace", 1.0), ("laplace", 0.5),
            ("bernoulli", 0.3), ("bernoulli", 0.8)]
    with Criterion(capsys, 1, "closed forms vs quadrature, rel err <= 1e-8", 10) as c:
        worst, count = 0.0, 0
        for fam in fams:
            X = make_family(*fam)
            for p in GRID:
                if in_domain(X, p) is not Membership.INSIDE:
                    continue
                err = rel(cigf(X, p, method="quadrature").value, closed_form(X, p))
                worst = max(worst, err)
                count += 1
                c.check(err <= 1e-8, f"{X.name} {p}: rel err {err:.2e}")
        c.note(f"{count} (family, α, β) cases, worst rel err {worst:.1e}")


def test_criterion_02_erlang_series(capsys):
    with Criterion(capsys, 2, "Erlang series vs quadrature within 1e-6", 5) as c:
        worst = 0.0
        for lam in (1.0, 2.0):
            X = make_family("erlang2", lam)
            for p in ((1.0, 1.0), (2.0, 1.0), (1.0, 0.5)):
                d = abs(cigf_erlang_series(lam, p).value - cigf(X, p, method="quadrature").value)
                worst = max(worst, d)
                c.check(d <= 1e-6, f"λ={lam} {p}: diff {d:.1e}")
        c.note(f"worst abs diff {worst:.1e}")


def test_criterion_03_gini_identity(capsys):
    with Criterion(capsys, 3, "G(1,1) = half the Gini mean difference (MC, 3σ)", 10) as c:
        mc = MonteCarloConfig(10 ** 6, SEED)
        for fam, exact in ((("exponential", 1.0), 0.5), (("uniform", 0.0, 1.0), 1 / 6),
                           (("power", 2.0), 0.1333333)):
            X = make_family(*fam)
            g = cigf(X, (1, 1)).value
            m = gini_mean_difference_mc(X, mc)
            c.check(abs(g - exact) <= 1e-7, f"{X.name}: G(1,1)={g} vs {exact}")
            c.check(abs(m.value - g) <= m.err_est, f"{X.name}: MC {m.value} ± {m.err_est}")
            c.note(f"{X.name}: G(1,1)={g:.7f}, MC {m.value:.5f} ± {m.err_est:.1e}")


def test_criterion_04_entropy_recovery(capsys):
    with Criterion(capsys, 4, "entropies recovered from the CIGF", 60) as c:
        for X in (E1, U):
            for n in (1, 2):
                d, r = ent.cre_n(X, n).value, ent.cre_n_from_cigf(X, n).value
                c.check(abs(d - r) <= 1e-4 * (1 + d), f"CRE_{n} {X.name}: {d} vs {r}")
            for nu in (0.5, 1.5):
                d, r = ent.cre_frac(X, nu).value, ent.cre_frac_from_cigf(X, nu).value
                c.check(abs(d - r) <= 1e-3, f"CRE_{nu} {X.name}: {d} vs {r}")
        for n in (1, 2):
            d, r = ent.ce_n(U, n).value, ent.ce_n_from_cigf(U, n).value
            c.check(abs(d - r) <= 1e-4 * (1 + d), f"CE_{n} {U.name}: {d} vs {r}")
        for nu in (0.5, 1.5):
            d, r = ent.ce_frac(U, nu).value, ent.ce_frac_from_cigf(U, nu).value
            c.check(abs(d - r) <= 1e-3, f"CE_{nu} {U.name}: {d} vs {r}")
        for nu in (0.5, 1.0, 1.5, 2.0):
            v = ent.cre_frac(E1, nu).value
            c.check(abs(v - 1.0) <= 1e-9, f"CRE_{nu} exponential(1) = {v}")
        try:
            ent.ce_from_cigf(E1)
            c.check(False, "CE of exponential(1) should be rejected as infinite")
        except DomainError:
            c.note("CE of exponential(1) is infinite; the CE side runs on uniform(0,1)")


def test_criterion_05_bounds(capsys):
    with Criterion(capsys, 5, "Chernoff, Bernoulli, Minkowski and Hölder bounds", 10) as c:
        total = 0
        worst = math.inf
        for fam in (("uniform", 0.0, 1.0), ("uniform", 0.0, 3.0), ("power", 2.0), ("power", 0.5),
                    ("exponential", 1.0), ("erlang2", 1.0), ("bernoulli", 0.5), ("bernoulli", 0.2)):
            rep = verify_bounds(make_family(*fam))
            total += len(rep.checks)
            worst = min([worst] + [k.margin for k in rep.checks])
            for f in rep.failures():
                c.check(False, f"{rep.distribution} {f.name} {f.params}: margin {f.margin:.2e}")
        c.note(f"{total} inequalities, smallest margin {worst:.2e}")
        for p in (0.2, 0.5, 0.7):
            X = make_family("bernoulli", p)
            for th in (0.25, 0.5, 0.75):
                d = abs(cigf(X, (th, 1 - th)).value - holder_bound(X, th))
                c.check(d <= 1e-12, f"Hölder equality bernoulli({p}) θ={th}: {d:.1e}")
        b, _, _ = chernoff_grid_infimum(make_family("erlang2", 1.0), (1, 1))
        a = erlang_chernoff_infimum(1.0, 1.0)
        c.check(a <= b <= 1.2 * a, f"erlang2 Chernoff grid {b} vs analytic {a}")
        c.note(f"erlang2 Chernoff grid infimum {b:.4f}, analytic {a:.4f}, ratio {b / a:.3f}")


def test_criterion_06_reliability(capsys):
    with Criterion(capsys, 6, "stress-strength reliability R_{k,n}", 30) as c:
        mc = MonteCarloConfig(10 ** 6, SEED)
        # (a) stress with the same law as the strengths
        for X in (E1, U, make_family("power", 2.0)):
            r = rkn_general(SystemSpec(2, 1, X, X)).value
            c.check(abs(r - 2 / 3) <= 1e-12, f"(a) {X.name}: R_1,2 = {r}")
        for n, k in ((2, 1), (5, 3)):
            m = rkn_monte_carlo(SystemSpec(n, k, E1, E1), mc)
            c.check(abs(m.value - (1 - k / (n + 1))) <= m.err_est, f"(a) MC n={n} k={k}: {m.value}")
        # (b) four paths
        for th in (0.5, 1.0, 2.0):
            X, n = make_family("power", th), 10
            rec = rkn_recurrence(X, n, 0.0, 1.0)
            mcs = rkn_monte_carlo_all(X, U, n, mc)
            for k in range(n + 1):
                vals = (rkn_power_closed(th, k, n), rkn_uniform_stress(X, k, n, 0.0, 1.0).value,
                        rec[k], rkn_general(SystemSpec(n, k, X, U)).value)
                c.check(max(vals) - min(vals) <= 1e-9, f"(b) θ={th} k={k}: spread {max(vals) - min(vals):.1e}")
                c.check(abs(mcs[k].value - vals[0]) <= mcs[k].err_est or mcs[k].value == vals[0],
                        f"(b) θ={th} k={k}: MC {mcs[k].value} vs {vals[0]}")
        # (c) power-strength curves under uniform stress
        for n in (50, 100):
            rows = figure1_data((0.1, 0.5, 1.0, 2.0, 10.0), n)
            curves = {}
            for th, k, v in rows:
                curves.setdefault(th, []).append(v)
            ths = sorted(curves)
            for th in ths:
                c.check(bool(np.all(np.diff(curves[th]) <= 0)), f"(c) n={n} θ={th} not nonincreasing")
            for lo, hi in zip(ths, ths[1:]):
                c.check(all(curves[lo][k] < curves[hi][k] for k in range(1, n + 1)),
                        f"(c) n={n}: θ={lo} not below θ={hi}")
            dev = max(abs(curves[1.0][k] - (1 - k / (n + 1))) for k in range(n + 1))
            c.check(dev <= 1e-14, f"(c) n={n}: θ=1 deviates by {dev:.1e}")


def test_criterion_07_order_statistics(capsys):
    with Criterion(capsys, 7, "order-statistic series and means", 20) as c:
        for n in (2, 3, 5):
            for p in ((0.5, 1.0), (1.0, 2.0), (2.0, 2.5)):
                d = abs(cigf_max_series(U, n, p).value - cigf(prop_rev_hazard(U, n), p, method="quadrature").value)
                c.check(d <= 1e-7, f"max series n={n} {p}: {d:.1e}")
            for X in (U, E1):
                for p in ((1.0, 0.5), (2.0, 1.0), (2.5, 2.0)):
                    d = abs(cigf_min_series(X, n, p).value - cigf(prop_hazard(X, n), p, method="quadrature").value)
                    c.check(d <= 1e-7, f"min series {X.name} n={n} {p}: {d:.1e}")
        c.note("the maximum series needs H_X at growing exponents, finite only on bounded support")
        mc = MonteCarloConfig(10 ** 6, SEED)
        for k, n in ((1, 3), (2, 4), (5, 5)):
            v = korn_mean(U, k, n).value
            c.check(abs(v - k / (n + 1)) <= 1e-9, f"E X_({k}:{n}) = {v}")
            m = order_statistic_mean_mc(U, k, n, mc)
            c.check(abs(m.value - v) <= m.err_est, f"MC E X_({k}:{n}) = {m.value} ± {m.err_est}")


def test_criterion_08_q_gini(capsys):
    with Criterion(capsys, 8, "q-Gini variability properties", 30) as c:
        qs = [DistortionPair.identity(), DistortionPair.power(1.0, 2.0), DistortionPair.power(0.5, 0.5)]
        for fam in (("uniform", 0.0, 1.0), ("power", 2.0), ("exponential", 1.0), ("laplace", 1.0),
                    ("erlang2", 1.0), ("bernoulli", 0.3), ("degenerate", 1.0)):
            X = make_family(*fam)
            for q in qs:
                rep = variability_axioms_check(X, X, q, tol=1e-10)
                for e in rep.entries[:4]:
                    c.check(e["passed"], f"{X.name} {q.tag} {e['property']}: {e['lhs']} vs {e['rhs']}")
        E2, P1, P2 = make_family("exponential", 2.0), make_family("power", 1.0), make_family("power", 2.0)
        c.check(dispersive_check(E2, E1) is Dispersive.HOLDS, "exp(2) <=_d exp(1) not verified")
        power_order = dispersive_check(P2, P1)
        c.note(f"power(2) <=_d power(1) is {power_order.value}; property 5 checked as the value inequality")
        for X, Y in ((E2, E1), (P2, P1)):
            for q in qs:
                gx, gy = q_gini(X, q).value, q_gini(Y, q).value
                c.check(gx <= gy + 1e-10, f"property 5 {X.name} vs {Y.name} {q.tag}: {gx} > {gy}")
        cmp_ = rkn_comparison(E2, E1, U, None, 5)
        c.check(cmp_.applicable and cmp_.passed is True, f"R^X <= R^Y exp(2) vs exp(1): {cmp_.reason}")
        c.note("R^X <= R^Y, n=5, uniform stress: " + ", ".join(
            f"k={e['k']} {e['lhs']:.4f}<={e['rhs']:.4f}" for e in cmp_.entries))
        for X, T in ((E1, E1), (U, P2), (E2, U)):
            w = weighted_q_gini(X, qs[0], T).value
            for s in range(5):
                m = mean_value_repr(X, T, MonteCarloConfig(10 ** 6, SEED + s))
                c.check(abs(m.value - w) <= m.err_est, f"mean-value form {X.name}/{T.name} seed {s}")


def test_criterion_09_bivariate(capsys):
    with Criterion(capsys, 9, "bivariate CIGF and joint entropies", 60) as c:
        for V in (bv.make_bivariate("fgm2x2", 0.1), bv.make_bivariate("fgm2x2", -0.2),
                  bv.make_bivariate("triangle_uniform")):
            for p in GRID:
                q = bv.cigf2(V, p, method="quadrature").value
                f = bv.cigf2(V, p, method="closed_form").value
                c.check(rel(q, f) <= 1e-8, f"{V.name} {p}: rel err {rel(q, f):.1e}")
        for X, Y in ((U, U), (E1, U), (make_family("power", 2.0), make_family("exponential", 2.0))):
            for p in GRID:
                j, pr = bv.cigf2_product_check(X, Y, p)
                c.check(rel(j.value, pr.value) <= 1e-7, f"product {X.name} x {Y.name} {p}")
        for X, Y, which in ((U, U, "ce"), (U, U, "cre"), (E1, E1, "cre"), (E1, U, "cre"),
                            (make_family("power", 2.0), U, "ce")):
            j, rhs = bv.entropy_identity_check(bv.make_bivariate("product", X, Y), which)
            c.check(abs(j - rhs) <= 1e-7, f"identity {which} {X.name} x {Y.name}: {j} vs {rhs}")
        F = bv.make_bivariate("fgm2x2", 0.1)
        for which in ("ce", "cre"):
            j, rhs = bv.entropy_identity_check(F, which)
            c.check(abs(j - rhs) > 0.01, f"identity {which} should fail for fgm2x2(0.1): gap {abs(j - rhs)}")
            c.note(f"fgm2x2(0.1) {which}: joint {j:.5f} vs {rhs:.5f}, gap {abs(j - rhs):.4f}")
        for V in (F, bv.make_bivariate("triangle_uniform"), bv.make_bivariate("product", U, U)):
            for which in ("ce", "cre"):
                d, r = bv.joint_recovery_check(V, which)
                c.check(abs(d.value - r.value) <= 1e-4, f"recovery {which} {V.name}: {d.value} vs {r.value}")


def test_criterion_10_verify_cli(capsys, monkeypatch):
    with Criterion(capsys, 10, "full verify run exits 0; an injected violation is named", 300) as c:
        out = io.StringIO()
        code = cli.run(["verify"], out, io.StringIO())
        c.check(code == 0, f"verify exit code {code}:\n{out.getvalue()}")
        c.check("all criteria passed" in out.getvalue(), "missing summary line")

        # perturb one closed form by one part in a million
        real = verify.closed_form
        monkeypatch.setattr(verify, "closed_form", lambda X, p: real(X, p) * (1 + 1e-6))
        out = io.StringIO()
        code = cli.run(["verify", "--suite", "table2"], out, io.StringIO())
        c.check(code != 0, "perturbed table2 still exits 0")
        c.check("failing criteria: table2" in out.getvalue(), f"failure not named:\n{out.getvalue()}")
        c.note("perturbed run: " + out.getvalue().strip().splitlines()[-1])
