"""Command-line interface and exit codes."""

import json

import numpy as np
import pytest

from fractalfc.cli import main
from fractalfc.network import load_connectome
from fractalfc.serialization import fc_from_csv, timeseries_to_csv
from fractalfc.simulate import TimeSeriesMatrix


SMALL_CONFIG = {
    "connectome": {"nodes": 10, "density": 0.3, "modules": 2, "seed": 5},
    "sim": {"dt": 0.05, "record_every": 160, "duration": 4296.0, "burn_in": 200.0},
    "sigma_h_grid": [0.0, 0.1],
    "replicates": 2,
    "wavelet_levels": 4,
}


@pytest.fixture()
def config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(SMALL_CONFIG))
    return path


def test_gen_connectome(tmp_path):
    out = tmp_path / "conn.csv"
    code = main(["gen-connectome", "--nodes", "8", "--density", "0.4",
                 "--modules", "2", "--seed", "3", "--out", str(out)])
    assert code == 0
    c = load_connectome(out)
    assert c.n == 8


def test_simulate_command(tmp_path, config_file):
    out = tmp_path / "trial"
    code = main(["simulate", "--config", str(config_file), "--out", str(out)])
    assert code == 0
    assert (out / "neuronal.csv").exists()
    assert (out / "bold.csv").exists()
    assert (out / "manifest.json").exists()


def test_sweep_command_deterministic(tmp_path, config_file):
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    assert main(["sweep", "--config", str(config_file), "--out", str(out1)]) == 0
    assert main(["sweep", "--config", str(config_file), "--out", str(out2)]) == 0
    for name in ("sweep.csv", "manifest.json", "sweep.svg"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_scales_command(tmp_path, config_file):
    out = tmp_path / "scales"
    code = main(["scales", "--config", str(config_file), "--sigma-h", "0.1",
                 "--out", str(out)])
    assert code == 0
    lines = (out / "scales.csv").read_text().splitlines()
    assert len(lines) == 1 + 10 * 4


def test_defractal_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    ts = TimeSeriesMatrix(rng.standard_normal((3, 2048)), 1.0, ("a", "b", "c"))
    bold_path = tmp_path / "bold.csv"
    timeseries_to_csv(ts, bold_path)
    out = tmp_path / "nonfractal.csv"
    code = main(["defractal", "--bold", str(bold_path), "--out", str(out)])
    assert code == 0
    fc = fc_from_csv(out)
    assert fc.estimator == "pearson"
    assert fc.n == 3


def test_selftest_command():
    assert main(["selftest"]) == 0


def test_exit_code_config_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"bogus": 1}')
    assert main(["sweep", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2


def test_exit_code_missing_config(tmp_path):
    missing = tmp_path / "none.json"
    assert main(["sweep", "--config", str(missing),
                 "--out", str(tmp_path / "o")]) == 2


def test_exit_code_numerical_failure(tmp_path):
    # Constant BOLD rows make connectivity estimation degenerate.
    data = np.ones((2, 2048))
    data[0] = np.random.default_rng(1).standard_normal(2048)
    ts = TimeSeriesMatrix(data + 0.0, 1.0, ("a", "b"))
    bold_path = tmp_path / "bold.csv"
    timeseries_to_csv(ts, bold_path)
    code = main(["defractal", "--bold", str(bold_path),
                 "--out", str(tmp_path / "fc.csv")])
    assert code == 3


def test_exit_code_io_error(tmp_path, config_file):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    code = main(["sweep", "--config", str(config_file),
                 "--out", str(blocker / "sub")])
    assert code == 4


def test_usage_error_maps_to_config_exit():
    assert main(["sweep"]) == 2  # missing required --out


def test_unknown_command():
    assert main(["frobnicate"]) == 2


def test_threshold_option_accepted(tmp_path):
    # Threshold is a raw cutoff, so it only makes sense per estimator
    # scale; pearson tolerates a mild one.
    doc = dict(SMALL_CONFIG, estimators=["pearson"])
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    out = tmp_path / "thr"
    code = main(["sweep", "--config", str(path), "--threshold", "0.01",
                 "--out", str(out)])
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["centrality_threshold"] == 0.01
