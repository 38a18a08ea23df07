"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 domain error, 4 accuracy error.

Numbers are printed with 17 significant digits.  Single results are one JSON
object ``{value, err_est, method, meta}``; grids are one JSON object per line,
or CSV with a header row when ``--format csv`` is given.

CSV columns
-----------
measure / bivariate grids:  alpha,beta,value,err_est,method
reliability:                theta,k,value,err_est,method  (theta empty unless --figure1)
bounds:                     name,side,value,bound,margin,passed
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import bivariate as bv
from . import entropy as ent
from .bounds import verify_bounds
from .cigf import MeasureReport, Method, cigf, cigf_odds, h_measure, k_measure
from .distributions import Distribution, make_family, parse_spec
from .gini import DistortionPair, q_gini, variability_axioms_check, weighted_q_gini
from .numerics import AccuracyError, DomainError, QuadSpec
from .reliability import (
    MonteCarloConfig,
    SystemSpec,
    figure1_data,
    rkn_general,
    rkn_monte_carlo_all,
    rkn_power_closed,
    rkn_recurrence,
    rkn_uniform_stress,
)
from .verify import SUITES, run_suite

EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_ACCURACY = 1, 2, 3, 4

_QUAD_KEYS = {"abs_tol": float, "rel_tol": float, "max_subdiv": int, "tail_mass": float,
              "series_terms_max": int, "series_tail_tol": float}
_MC_KEYS = {"n_trials": int, "seed": int, "n_streams": int}
_FAMILIES = {"bernoulli", "bern", "uniform", "unif", "power", "pow", "exponential", "exp",
             "laplace", "erlang2", "degenerate", "deg", "emp", "empirical"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def _plain(o):
    """Reduce enums, numpy scalars and tuples to JSON-ready Python values."""
    if isinstance(o, dict):
        return {str(k): _plain(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_plain(v) for v in o]
    if isinstance(o, Method):
        return o.value
    if hasattr(o, "item"):
        try:
            return o.item()
        except (TypeError, ValueError):
            pass
    if o is None or isinstance(o, (bool, int, float, str)):
        return o
    return str(o)


def _dumps(o) -> str:
    """JSON with every float at 17 significant digits; non-finite floats become strings."""
    if isinstance(o, bool) or o is None:
        return json.dumps(o)
    if isinstance(o, float):
        return f"{o:.17g}" if math.isfinite(o) else json.dumps(str(o))
    if isinstance(o, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_dumps(v)}" for k, v in o.items()) + "}"
    if isinstance(o, list):
        return "[" + ",".join(_dumps(v) for v in o) + "]"
    return json.dumps(o, ensure_ascii=False)


def _f17(x) -> str:
    return f"{x:.17g}" if isinstance(x, float) else str(x)


def _emit_json(obj, out):
    out.write(_dumps(_plain(obj)) + "\n")


def _report_dict(r: MeasureReport, **extra) -> dict:
    d = r.to_dict()
    d.update(extra)
    return d


def _emit_rows(rows: list[dict], cols: list[str], fmt: str, out):
    if fmt == "csv":
        out.write(",".join(cols) + "\n")
        for r in rows:
            out.write(",".join(_f17(r.get(c, "")) if r.get(c) is not None else "" for c in cols) + "\n")
    else:
        for r in rows:
            _emit_json(r, out)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def _read_config(path: str | None) -> dict:
    path = path or os.environ.get("CIGF_CONFIG")
    if not path:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    cfg = {}
    for i, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        if not sep or key not in {**_QUAD_KEYS, **_MC_KEYS}:
            raise UsageError(f"{path}:{i}: expected key=value with a known key, got {line!r}")
        try:
            cfg[key] = {**_QUAD_KEYS, **_MC_KEYS}[key](val.strip())
        except ValueError as exc:
            raise UsageError(f"{path}:{i}: bad value for {key}") from exc
    return cfg


def _settings(args) -> tuple[QuadSpec, MonteCarloConfig]:
    cfg = _read_config(args.config)
    for key in list(_QUAD_KEYS) + list(_MC_KEYS):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    spec = QuadSpec(**{k: v for k, v in cfg.items() if k in _QUAD_KEYS})
    mc = MonteCarloConfig(**{k: v for k, v in cfg.items() if k in _MC_KEYS})
    return spec, mc


def _dist(text: str) -> Distribution:
    head = text.partition(":")[0].lower()
    if head not in _FAMILIES:
        raise UsageError(f"unknown distribution {head!r} in {text!r}")
    rest = text.partition(":")[2]
    if head not in ("emp", "empirical"):
        try:
            [float(p) for p in rest.split(":")] if rest else []
        except ValueError as exc:
            raise UsageError(f"bad distribution spec {text!r}") from exc
    return parse_spec(text)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--{missing[0]} is required for --measure {args.measure}")


def _one_measure(args, X: Distribution, spec: QuadSpec, a, b) -> MeasureReport:
    m, via = args.measure, args.via
    if m == "cigf":
        return cigf(X, (a, b), spec, method=args.method)
    if m == "h":
        return h_measure(X, a, spec)
    if m == "k":
        return k_measure(X, b, spec)
    if m == "odds":
        return cigf_odds(X, b, spec)
    if m in ("cre", "ce"):
        if via == "direct":
            return (ent.cre if m == "cre" else ent.ce)(X, spec)
        if via == "marginal":
            return ent.marginal_recovery(X, m, 1, spec)
        return (ent.cre_from_cigf if m == "cre" else ent.ce_from_cigf)(X, spec)
    if m in ("cre_n", "ce_n"):
        _need(args, "n")
        if via == "direct":
            return (ent.cre_n if m == "cre_n" else ent.ce_n)(X, args.n, spec)
        if via == "marginal":
            return ent.marginal_recovery(X, m[:-2], args.n, spec)
        return (ent.cre_n_from_cigf if m == "cre_n" else ent.ce_n_from_cigf)(X, args.n, spec)
    if m in ("cre_frac", "ce_frac"):
        _need(args, "nu")
        if via == "direct":
            return (ent.cre_frac if m == "cre_frac" else ent.ce_frac)(X, args.nu, spec)
        if via == "marginal":
            return ent.marginal_recovery(X, m[:-5], args.nu, spec)
        fn = ent.cre_frac_from_cigf if m == "cre_frac" else ent.ce_frac_from_cigf
        return fn(X, args.nu, spec=spec)
    raise UsageError(f"unknown measure {m!r}")


def cmd_measure(args, out) -> int:
    spec, _ = _settings(args)
    X = _dist(args.dist)
    alphas = _floats(args.alpha) if args.alpha is not None else [None]
    betas = _floats(args.beta) if args.beta is not None else [None]
    if args.measure in ("cigf",):
        _need(args, "alpha", "beta")
    if args.measure == "h":
        _need(args, "alpha")
    if args.measure in ("k", "odds"):
        _need(args, "beta")
    if len(alphas) == 1 and len(betas) == 1 and args.format == "json":
        _emit_json(_one_measure(args, X, spec, alphas[0], betas[0]).to_dict(), out)
        return 0
    rows = [_report_dict(_one_measure(args, X, spec, a, b), alpha=a, beta=b)
            for a in alphas for b in betas]
    _emit_rows(rows, ["alpha", "beta", "value", "err_est", "method"], args.format, out)
    return 0


def cmd_bounds(args, out) -> int:
    spec, _ = _settings(args)
    X = _dist(args.dist)
    rep = verify_bounds(X, spec=spec)
    rows = [{"name": c.name, "params": c.params, "side": c.side, "value": c.value, "bound": c.bound,
             "margin": c.margin, "passed": c.passed, "note": c.note} for c in rep.checks]
    _emit_rows(rows, ["name", "side", "value", "bound", "margin", "passed"], args.format, out)
    return 0 if rep.ok else EXIT_FAIL


def cmd_reliability(args, out) -> int:
    spec, mc = _settings(args)
    cols = ["theta", "k", "value", "err_est", "method"]
    if args.figure1:
        thetas = _floats(args.thetas)
        rows = [{"theta": th, "k": k, "value": v, "err_est": 0.0, "method": args.method}
                for th, k, v in figure1_data(thetas, args.n, args.method, spec, mc)]
        _emit_rows(rows, cols, args.format, out)
        return 0
    X = _dist(args.dist)
    T = _dist(args.stress) if args.stress else make_family("uniform", 0.0, 1.0)
    ks = range(args.n + 1) if args.k is None else [args.k]
    SystemSpec(args.n, 0, X, T)
    if args.method == "closed":
        if X.tag[0] != "power" or T.tag != ("uniform", 0.0, 1.0):
            raise DomainError("closed-form reliability needs power strengths and Unif(0,1) stress")
        reps = {k: MeasureReport(rkn_power_closed(X.theta, k, args.n), 0.0, Method.CLOSED_FORM, {})
                for k in ks}
    elif args.method == "sum":
        if T.tag[0] != "uniform":
            raise DomainError("the CIGF sum needs uniform stress")
        reps = {k: rkn_uniform_stress(X, k, args.n, T.support.l, T.support.r, spec) for k in ks}
    elif args.method == "recurrence":
        if T.tag[0] != "uniform":
            raise DomainError("the recurrence needs uniform stress")
        vals = rkn_recurrence(X, args.n, T.support.l, T.support.r, spec)
        reps = {k: MeasureReport(vals[k], 0.0, Method.CLOSED_FORM, {}) for k in ks}
    elif args.method == "general":
        reps = {k: rkn_general(SystemSpec(args.n, k, X, T), spec) for k in ks}
    else:
        allk = rkn_monte_carlo_all(X, T, args.n, mc)
        reps = {k: allk[k] for k in ks}
    rows = [_report_dict(reps[k], theta=None, k=k) for k in ks]
    _emit_rows(rows, cols, args.format, out)
    return 0


def _distortion(text: str) -> DistortionPair:
    if text == "identity":
        return DistortionPair.identity()
    head, _, rest = text.partition(":")
    if head != "power":
        raise UsageError(f"distortion must be 'identity' or 'power:a:b', got {text!r}")
    try:
        a, b = (float(v) for v in rest.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad distortion {text!r}") from exc
    return DistortionPair.power(a, b)


def cmd_gini(args, out) -> int:
    spec, _ = _settings(args)
    X = _dist(args.dist)
    q = _distortion(args.q)
    if args.axioms:
        Y = _dist(args.dist2) if args.dist2 else X
        rep = variability_axioms_check(X, Y, q, spec)
        for e in rep.entries:
            _emit_json(e, out)
        return 0 if rep.passed else EXIT_FAIL
    r = weighted_q_gini(X, q, _dist(args.weight), spec) if args.weight else q_gini(X, q, spec)
    _emit_json(r.to_dict(), out)
    return 0


def _bivariate(text: str) -> bv.BivariateDistribution:
    head, _, rest = text.partition(":")
    if head == "fgm2x2":
        try:
            theta = float(rest or 0.0)
        except ValueError as exc:
            raise UsageError(f"bad θ in {text!r}") from exc
        return bv.make_bivariate("fgm2x2", theta)
    if head in ("triangle_uniform", "sum_density"):
        return bv.make_bivariate(head)
    if head == "product":
        parts = rest.split(",")
        if len(parts) != 2:
            raise UsageError("product needs two specs: product:exp:1,unif:0:1")
        return bv.make_bivariate("product", _dist(parts[0]), _dist(parts[1]))
    raise UsageError(f"unknown bivariate example {head!r}")


def cmd_bivariate(args, out) -> int:
    spec, _ = _settings(args)
    V = _bivariate(args.example)
    m = args.measure
    if m in ("cigf", "odds"):
        if m == "cigf":
            if args.alpha is None or args.beta is None:
                raise UsageError("--alpha and --beta are required for cigf")
            grid = [(a, b) for a in _floats(args.alpha) for b in _floats(args.beta)]
            rows = [_report_dict(bv.cigf2(V, p, spec), alpha=p[0], beta=p[1]) for p in grid]
        else:
            if args.beta is None:
                raise UsageError("--beta is required for odds")
            rows = [_report_dict(bv.odds2(V, b, spec), alpha=-b, beta=b) for b in _floats(args.beta)]
        if len(rows) == 1 and args.format == "json":
            _emit_json(rows[0], out)
        else:
            _emit_rows(rows, ["alpha", "beta", "value", "err_est", "method"], args.format, out)
        return 0
    order = args.n if m.endswith("_n") else args.nu if m.endswith("_frac") else None
    if m.endswith(("_n", "_frac")) and order is None:
        raise UsageError(f"--{'n' if m.endswith('_n') else 'nu'} is required for {m}")
    fn = getattr(bv, f"joint_{m}")
    r = fn(V, spec=spec, region=args.region) if order is None else fn(V, order, spec, args.region)
    _emit_json(r.to_dict(), out)
    return 0


def cmd_verify(args, out) -> int:
    spec, mc = _settings(args)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = []
    for name in names:
        checks, secs = run_suite(name, spec, mc)
        bad = [c for c in checks if not c.passed]
        status = "PASS" if not bad else "FAIL"
        out.write(f"{status} {name} ({len(checks) - len(bad)}/{len(checks)} checks, {secs:.2f} s)\n")
        for c in checks:
            if args.verbose or not c.passed:
                out.write(f"    {'ok  ' if c.passed else 'FAIL'} {c.name}: {c.detail}\n")
        if bad:
            failed.append(name)
    if failed:
        out.write(f"failing criteria: {', '.join(failed)}\n")
        return EXIT_FAIL
    out.write("all criteria passed\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage().strip()}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value file presetting tolerances and MC settings "
                        "(default: $CIGF_CONFIG)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    for key, typ in {**_QUAD_KEYS, **_MC_KEYS}.items():
        common.add_argument(f"--{key.replace('_', '-')}", dest=key, type=typ, default=None)

    p = _Parser(prog="cigf", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", parents=[common], help="evaluate a univariate measure")
    m.add_argument("--dist", required=True, help="e.g. exp:1, unif:0:1, pow:2, bern:0.3, emp:@file")
    m.add_argument("--measure", required=True,
                   choices=["cigf", "cre", "ce", "cre_n", "ce_n", "cre_frac", "ce_frac", "h", "k", "odds"])
    m.add_argument("--alpha", help="value or comma-separated grid")
    m.add_argument("--beta", help="value or comma-separated grid")
    m.add_argument("--n", type=int)
    m.add_argument("--nu", type=float)
    m.add_argument("--via", choices=["direct", "cigf", "marginal"], default="direct")
    m.add_argument("--method", choices=["auto", "closed_form", "series", "quadrature"], default="auto")
    m.set_defaults(func=cmd_measure)

    b = sub.add_parser("bounds", parents=[common], help="check every applicable inequality")
    b.add_argument("--dist", required=True)
    b.set_defaults(func=cmd_bounds)

    r = sub.add_parser("reliability", parents=[common], help="k-out-of-n stress-strength reliability")
    r.add_argument("--dist", default="pow:1", help="strength law")
    r.add_argument("--stress", help="stress law (default unif:0:1)")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int)
    r.add_argument("--method", choices=["closed", "sum", "recurrence", "general", "mc"], default="general")
    r.add_argument("--figure1", action="store_true", help="power strengths, Unif(0,1) stress, all k")
    r.add_argument("--thetas", default="0.1,0.5,1,2,10")
    r.set_defaults(func=cmd_reliability)

    g = sub.add_parser("gini", parents=[common], help="distorted Gini function")
    g.add_argument("--dist", required=True)
    g.add_argument("--q", default="identity", help="identity or power:a:b")
    g.add_argument("--weight", help="weighting law T for the weighted form")
    g.add_argument("--axioms", action="store_true")
    g.add_argument("--dist2", help="second law for the dispersive-order property")
    g.set_defaults(func=cmd_gini)

    v = sub.add_parser("bivariate", parents=[common], help="bivariate CIGF and joint entropies")
    v.add_argument("--example", required=True,
                   help="fgm2x2:θ, triangle_uniform, sum_density, product:SPEC,SPEC")
    v.add_argument("--measure", default="cigf",
                   choices=["cigf", "odds", "cre", "ce", "cre_n", "ce_n", "cre_frac", "ce_frac"])
    v.add_argument("--alpha")
    v.add_argument("--beta")
    v.add_argument("--n", type=int)
    v.add_argument("--nu", type=float)
    v.add_argument("--region", choices=["rect", "S"], default="rect")
    v.set_defaults(func=cmd_bivariate)

    w = sub.add_parser("verify", parents=[common], help="run the oracle suites")
    w.add_argument("--suite", choices=["all", *SUITES], default="all")
    w.add_argument("-v", "--verbose", action="store_true")
    w.set_defaults(func=cmd_verify)
    return p


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        err.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except AccuracyError as exc:
        err.write(f"accuracy error: {exc}\n")
        return EXIT_ACCURACY


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:         # output piped into e.g. head
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)
