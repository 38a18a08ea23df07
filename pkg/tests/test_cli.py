import io
import json
import subprocess
import sys

import pytest

from cigfkit import cli, verify
from cigfkit.verify import Check


def call(*argv, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_measure_json_schema():
    code, out, _ = call("measure", "--dist", "exp:1", "--measure", "cigf", "--alpha", "1", "--beta", "1")
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {"value", "err_est", "method", "meta"}
    assert obj["value"] == 0.5 and obj["method"] == "closed_form"


def test_seventeen_digit_output():
    code, out, _ = call("measure", "--dist", "unif:0:1", "--measure", "cigf", "--alpha", "1", "--beta", "1")
    assert code == 0 and '"value":0.16666666666666666,' in out


def test_measure_grid_lines():
    code, out, _ = call("measure", "--dist", "unif:0:1", "--measure", "cigf",
                        "--alpha", "0.5,1,2", "--beta", "1,2")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6
    assert {(json.loads(s)["alpha"], json.loads(s)["beta"]) for s in lines} == {
        (a, b) for a in (0.5, 1.0, 2.0) for b in (1.0, 2.0)}


def test_measure_csv_header():
    code, out, _ = call("measure", "--dist", "pow:2", "--measure", "cigf", "--alpha", "1",
                        "--beta", "1", "--format", "csv")
    header, row = out.strip().splitlines()
    assert header == "alpha,beta,value,err_est,method"
    assert float(row.split(",")[2]) == pytest.approx(2 / 15, rel=1e-15)


@pytest.mark.parametrize("argv", [
    ["measure", "--dist", "exp:1", "--measure", "cre"],
    ["measure", "--dist", "exp:1", "--measure", "cre", "--via", "cigf"],
    ["measure", "--dist", "unif:0:1", "--measure", "ce_n", "--n", "2", "--via", "marginal"],
    ["measure", "--dist", "exp:1", "--measure", "cre_frac", "--nu", "0.5"],
    ["measure", "--dist", "unif:0:1", "--measure", "odds", "--beta", "0.5"],
    ["measure", "--dist", "erlang2:1", "--measure", "cigf", "--alpha", "2", "--beta", "1",
     "--method", "series"],
    ["gini", "--dist", "exp:1"],
    ["gini", "--dist", "exp:2", "--q", "power:1:2", "--axioms", "--dist2", "exp:1"],
    ["gini", "--dist", "exp:2", "--weight", "unif:0:1"],
    ["reliability", "--n", "2", "--k", "1", "--dist", "exp:1", "--stress", "exp:1"],
    ["reliability", "--n", "10", "--dist", "pow:2", "--method", "recurrence"],
    ["reliability", "--n", "5", "--figure1", "--thetas", "0.5,1,2", "--format", "csv"],
    ["reliability", "--n", "4", "--dist", "pow:2", "--method", "mc", "--n-trials", "20000"],
    ["bivariate", "--example", "fgm2x2:0.1", "--alpha", "1", "--beta", "1"],
    ["bivariate", "--example", "triangle_uniform", "--measure", "ce", "--region", "S"],
    ["bivariate", "--example", "product:unif:0:1,exp:1", "--measure", "cre"],
    ["bounds", "--dist", "unif:0:1"],
    ["verify", "--suite", "table2"],
])
def test_success_paths(argv):
    code, out, err = call(*argv)
    assert code == 0, err
    assert out.strip()


@pytest.mark.parametrize("argv", [
    [],
    ["measure", "--dist", "exp:1"],
    ["measure", "--dist", "weibull:1", "--measure", "cre"],
    ["measure", "--dist", "exp:abc", "--measure", "cre"],
    ["measure", "--dist", "exp:1", "--measure", "cigf", "--alpha", "x", "--beta", "1"],
    ["measure", "--dist", "exp:1", "--measure", "cigf", "--alpha", "1"],
    ["measure", "--dist", "exp:1", "--measure", "cre_n"],
    ["gini", "--dist", "exp:1", "--q", "wang:1"],
    ["verify", "--suite", "nosuch"],
])
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 2 and "usage error" in err


@pytest.mark.parametrize("argv", [
    ["measure", "--dist", "exp:1", "--measure", "cigf", "--alpha", "1", "--beta", "0"],
    ["measure", "--dist", "exp:-1", "--measure", "cre"],
    ["measure", "--dist", "exp:1", "--measure", "ce", "--via", "cigf"],
    ["bivariate", "--example", "triangle_uniform", "--measure", "odds", "--beta", "1"],
    ["bivariate", "--example", "fgm2x2:0.5", "--alpha", "1", "--beta", "1"],
])
def test_domain_errors(argv):
    code, _, err = call(*argv)
    assert code == 3 and "domain error" in err


def test_accuracy_error():
    code, _, err = call("measure", "--dist", "erlang2:1", "--measure", "cigf", "--alpha", "0.5",
                        "--beta", "1", "--method", "series", "--series-terms-max", "5")
    assert code == 4 and "accuracy error" in err


def test_config_file_and_override(tmp_path, monkeypatch):
    cfg = tmp_path / "cigf.conf"
    cfg.write_text("# small budget\nseries_terms_max = 5\n")
    argv = ["measure", "--dist", "erlang2:1", "--measure", "cigf", "--alpha", "0.5", "--beta", "1",
            "--method", "series"]
    assert call(*argv, "--config", str(cfg))[0] == 4
    monkeypatch.setenv("CIGF_CONFIG", str(cfg))
    assert call(*argv)[0] == 4
    assert call(*argv, "--series-terms-max", "10000", "--series-tail-tol", "1e-6")[0] == 0


@pytest.mark.parametrize("text", ["nonsense\n", "abs_tol = x\n", "colour = red\n"])
def test_bad_config(tmp_path, text):
    cfg = tmp_path / "bad.conf"
    cfg.write_text(text)
    code, _, err = call("measure", "--dist", "exp:1", "--measure", "cre", "--config", str(cfg))
    assert code == 2


def test_missing_config_file(tmp_path):
    code, _, _ = call("measure", "--dist", "exp:1", "--measure", "cre", "--config", str(tmp_path / "nope"))
    assert code == 2


def test_mc_output_is_deterministic():
    argv = ["reliability", "--n", "3", "--dist", "exp:1", "--method", "mc", "--n-trials", "50000",
            "--seed", "9"]
    assert call(*argv)[1] == call(*argv)[1]


def test_bounds_csv():
    code, out, _ = call("bounds", "--dist", "bern:0.5", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "name,side,value,bound,margin,passed"


def test_verify_reports_injected_failure(monkeypatch):
    def broken(spec, mc):
        return [Check("bogus invariant", False, "injected")]

    monkeypatch.setitem(verify.SUITES, "table2", broken)
    monkeypatch.setitem(cli.SUITES, "table2", broken)
    code, out, _ = call("verify", "--suite", "table2")
    assert code == 1
    assert "FAIL table2" in out and "bogus invariant" in out and "failing criteria: table2" in out


def test_verify_reports_crash_as_failure(monkeypatch):
    def crash(spec, mc):
        raise RuntimeError("boom")

    monkeypatch.setitem(verify.SUITES, "erlang", crash)
    code, out, _ = call("verify", "--suite", "erlang")
    assert code == 1 and "RuntimeError: boom" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cigfkit", "measure", "--dist", "exp:2",
                           "--measure", "cre"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == pytest.approx(0.5, rel=1e-12)


def test_module_entry_point_exit_code():
    proc = subprocess.run([sys.executable, "-m", "cigfkit", "measure", "--dist", "exp:1",
                           "--measure", "cigf", "--alpha", "1", "--beta", "0"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 3 and "domain error" in proc.stderr
