import json
import os
import subprocess

import pytest

CLI = os.environ.get("MORALUG_CLI")
DATA = os.environ.get("MORALUG_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))

try:
    import moralug
except ImportError:  # module not installed; the CLI checks still run
    moralug = None

needs_module = pytest.mark.skipif(moralug is None, reason="moralug extension not installed")
needs_cli = pytest.mark.skipif(not CLI, reason="MORALUG_CLI not set")


def run_cli(*args):
    out = subprocess.run([CLI, *args], capture_output=True, text=True)
    return out.returncode, out.stdout


@needs_cli
def test_cli_solve_json():
    rc, out = run_cli("solve", "--alpha", "0.5", "--kappa", "0.6")
    assert rc == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["region"] == "R2"
    assert doc["strategy"]["x1"] == pytest.approx(doc["strategy"]["x2"])


@needs_cli
def test_cli_metrics():
    rc, out = run_cli("metrics", "--lnl", "-2063.28", "--k", "1", "--n", "96", "--en", "0")
    assert rc == 0
    assert json.loads(out)["icl"] == pytest.approx(4144.82, abs=0.02)


@needs_cli
def test_cli_nash_has_bounds():
    rc, out = run_cli("nash", "--alpha", "0.3", "--kappa", "0.5")
    assert rc == 0
    doc = json.loads(out)
    for key in ("tau", "x2_lower", "x1_upper", "rho", "segment", "asymmetric_stub"):
        assert key in doc


@needs_cli
def test_cli_validation_exit_code():
    rc, _ = run_cli("solve", "--alpha", "0.5", "--kappa", "2")
    assert rc == 2


@needs_cli
def test_cli_predict_example(tmp_path):
    rc, _ = run_cli("predict", "--estimates", os.path.join(DATA, "example_estimates.csv"), "--out", str(tmp_path))
    assert rc == 0
    doc = json.loads((tmp_path / "predictions.json").read_text())
    # e07 has alpha above the filter bound
    assert doc["filter"]["dropped_ids"] == ["e07"]
    assert doc["dg_transfer"]["obs"] == 6


@needs_module
def test_module_solve():
    doc = moralug.solve(0.5, 0.6)
    assert doc["schema_version"] == moralug.SCHEMA_VERSION
    assert doc["region"] == "R2"


@needs_module
def test_module_predictions():
    dg, ug = moralug.predict_behavior(0.13, 0.22, 0.26)
    assert dg == pytest.approx(22.16, abs=0.01)
    assert moralug.predict_behavior(-0.02, 0.0, 0.2)[1] == 0.0
    assert moralug.icl(-1865.90, 3, 96, 13.50) == pytest.approx(3809.21, abs=0.02)


@needs_module
def test_module_bad_input_raises():
    with pytest.raises(ValueError):
        moralug.solve(0.5, 1.5)


@needs_module
def test_module_estimate_round_trip():
    csv = moralug.simulate_choices([(0.05, 0.08, 0.25, 0.28), (0.28, -0.30, 0.19, 0.16)], [0.6, 0.4], 100, seed=1)
    fit = moralug.estimate(csv, k=2, seed=1)
    shares = sorted(t["share"] for t in fit["types"])
    assert shares[1] == pytest.approx(0.6, abs=0.1)
    assert fit["monotone"]
