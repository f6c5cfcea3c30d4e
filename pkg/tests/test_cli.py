import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from lmoments.cli import EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, EXIT_SUITE, main, resolve_config

SRC = str(Path(__file__).resolve().parents[1] / "src")


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _strip_runtime(record: dict) -> dict:
    record = dict(record)
    record.pop("runtime")
    return record


def test_resolve_defaults(monkeypatch):
    monkeypatch.setenv("LMOMENTS_THREADS", "3")
    cfg = resolve_config(["compare", "--Q", "40"])
    assert cfg.threads == 3
    assert cfg.shifts.alpha.real > cfg.shifts.beta.real > 0
    d = cfg.to_dict()
    for key in ("precision", "euler_product", "weight", "contour", "budget", "shifts"):
        assert key in d
    assert "threads" not in json.dumps(d)


def test_explicit_shifts():
    cfg = resolve_config(["compare", "--alpha-re", "0.05", "--alpha-im", "0.01", "--beta-re", "0.02"])
    assert cfg.shifts.alpha == 0.05 + 0.01j and cfg.shifts.beta == 0.02


@pytest.mark.parametrize("argv", [
    ["compare", "--alpha-re", "0.1", "--beta-re", "0.1"],
    ["compare", "--alpha-re", "0.1"],
    ["compare", "--auto-shifts", "--alpha-re", "0.1", "--beta-re", "0.2"],
    ["compare", "--h", "0"],
    ["compare", "--contour-step", "0.03"],
    ["compare", "--em-order", "3"],
    ["sweep", "--Q", "30"],
    ["verify-identities", "--suites", "nonsense"],
])
def test_config_errors(argv, capsys):
    code, out, err = _run(argv, capsys)
    assert code == EXIT_CONFIG
    record = json.loads(err.strip().splitlines()[-1])
    assert record["error"] == "config" and record["exit_code"] == EXIT_CONFIG


def test_unknown_flag_is_config_error(capsys):
    code, _, err = _run(["compare", "--bogus"], capsys)
    assert code == EXIT_CONFIG
    assert json.loads(err)["error"] == "config"


def test_budget_guard(capsys):
    code, out, err = _run(["compute-moment", "--Q", "200", "--budget", "1000"], capsys)
    assert code == EXIT_BUDGET and out == ""
    assert json.loads(err)["error"] == "budget"
    code, out, _ = _run(["compute-moment", "--Q", "20", "--budget", "1", "--budget-override"], capsys)
    assert code == EXIT_OK and json.loads(out)["config"]["budget"] is None


def test_compare_json(capsys):
    code, out, _ = _run(["compare", "--Q", "30", "--h", "2", "--k", "1", "--auto-shifts"], capsys)
    assert code == EXIT_OK
    rec = json.loads(out)
    res = rec["result"]
    for key in ("brute_force", "executed_main", "theorem1_main", "diagonal_main"):
        assert set(res[key]) == {"re", "im"}
    assert rec["config"]["h"] == 2 and rec["config"]["auto_shifts"] is True
    assert rec["runtime"]["threads"] >= 1


def test_compare_csv_columns(capsys, tmp_path):
    path = tmp_path / "row.csv"
    code, out, _ = _run(["compare", "--Q", "30", "--format", "csv", "--output", str(path)], capsys)
    assert code == EXIT_OK and out == ""
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert len(rows) == 1
    row = rows[0]
    for col in ("Q", "h", "k", "alpha_re", "alpha_im", "beta_re", "beta_im", "brute_re", "brute_im",
                "executed_re", "executed_im", "theorem1_re", "diagonal_re", "relative_gap", "error_bar",
                "runtime_s", "config.precision.zeta_series_terms", "config.euler_product.prime_cutoff"):
        assert col in row
    gap = abs(complex(float(row["brute_re"]), float(row["brute_im"]))
              / complex(float(row["executed_re"]), float(row["executed_im"])) - 1)
    assert abs(gap - float(row["relative_gap"])) < 1e-12


def test_compare_is_reproducible_across_threads(tmp_path):
    outs = []
    for threads in ("1", "2"):
        path = tmp_path / f"t{threads}.json"
        env = dict(os.environ, PYTHONPATH=SRC)
        proc = subprocess.run([sys.executable, "-m", "lmoments", "compare", "--Q", "30", "--threads", threads,
                               "--output", str(path)], env=env, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs.append(_strip_runtime(json.loads(path.read_text())))
    assert json.dumps(outs[0], sort_keys=True) == json.dumps(outs[1], sort_keys=True)


def test_predict_and_compute_and_diagonal(capsys):
    code, out, _ = _run(["predict-moment", "--Q", "50"], capsys)
    assert code == EXIT_OK and "executed_main" in json.loads(out)["result"]
    code, out, _ = _run(["compute-moment", "--Q", "20"], capsys)
    res = json.loads(out)["result"]
    assert code == EXIT_OK and res["brute_force_error"] > 0
    code, out, _ = _run(["diagonal", "--Q", "50", "--contour-eps", "0.1"], capsys)
    assert code == EXIT_OK and "diagonal_main" in json.loads(out)["result"]


def test_diagonal_bad_contour(capsys):
    code, _, err = _run(["diagonal", "--Q", "50", "--contour-eps", "-0.1"], capsys)
    assert code == EXIT_CONFIG


def test_sweep(tmp_path, capsys):
    coeffs = tmp_path / "coeffs.csv"
    coeffs.write_text("h,re,im\n1,1,0\n2,-1,0\n3,-1,0\n")
    code, out, _ = _run(["sweep", "--Q", "30", "--lambda-file", str(coeffs)], capsys)
    assert code == EXIT_OK
    res = json.loads(out)["result"]
    assert set(res["residual"]) == {"re", "im"}
    assert len(res["coefficients"]["entries"]) == 3
    dup = tmp_path / "dup.csv"
    dup.write_text("h,re,im\n1,1,0\n1,2,0\n")
    code, _, _ = _run(["sweep", "--Q", "30", "--lambda-file", str(dup)], capsys)
    assert code == EXIT_CONFIG


def test_verify_subset_passes(capsys):
    code, out, _ = _run(["verify-identities", "--q-max", "30", "--sum-limit", "100000",
                         "--suites", "approximate_functional_equation,orthogonality,functional_equation,"
                         "coprime_primitive_count_series,totient_series_euler_product,mellin_shift"], capsys)
    assert code == EXIT_OK
    ids = json.loads(out)["result"]["identities"]
    assert [r["identity"] for r in ids][:2] == ["approximate_functional_equation", "orthogonality"]
    assert all(r["passed"] for r in ids)


def test_suite_failure_exit_code(capsys):
    # a crippled Euler-Maclaurin profile breaks the functional equation check
    code, out, err = _run(["verify-identities", "--q-max", "12", "--zeta-terms", "10", "--em-order", "2",
                           "--suites", "functional_equation"], capsys)
    assert code == EXIT_SUITE
    assert json.loads(err)["error"] == "suite_failure"
    assert json.loads(out)["result"]["identities"][0]["passed"] is False


def test_orthogonality_check_csv(capsys):
    code, out, _ = _run(["orthogonality-check", "--q-max", "40", "--mn-max", "8", "--format", "csv"], capsys)
    assert code == EXIT_OK
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["passed"] == "True"


def test_module_entry_point():
    env = dict(os.environ, PYTHONPATH=SRC)
    proc = subprocess.run([sys.executable, "-m", "lmoments", "--version"], env=env, capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
