import json
import logging
import os

import numpy as np
import pandas as pd
import pytest

from src.application.services.settings_manager import SettingsManager
from src.core.logger import logger
from src.infrastructure.exporters.binary_exporter import COVERAGE_HEADER, BinaryExporter
from src.infrastructure.exporters.manifest_writer import ManifestWriter
from src.presentation.cli.cli import EXIT_CONFIG, EXIT_OK, CommandLineApp


@pytest.fixture
def app(tmp_path, monkeypatch):
    for key in SettingsManager.KEYS:
        monkeypatch.delenv(key, raising=False)
    return CommandLineApp(SettingsManager(str(tmp_path / "missing.env")))


def _manifest(out):
    with open(os.path.join(out, "manifest.json"), encoding="utf-8") as f:
        return json.load(f)


def test_gdop_writes_both_presets(app, tmp_path):
    out = str(tmp_path / "gdop")

    assert app.run(["gdop", "--out", out]) == EXIT_OK

    frame = pd.read_csv(os.path.join(out, "gdop.csv"))
    assert len(frame) == 362
    assert frame.groupby("preset").size().to_dict() == {"aoa": 181, "tdoa": 181}
    aoa = frame[frame["preset"] == "aoa"].reset_index(drop=True)
    assert aoa["gdop_m"].idxmax() == 180


def test_gdop_single_preset(app, tmp_path):
    out = str(tmp_path / "gdop")

    assert app.run(["gdop", "--preset", "tdoa", "--range", "200", "--out", out]) == EXIT_OK

    frame = pd.read_csv(os.path.join(out, "gdop.csv"))
    assert len(frame) == 181
    assert set(frame["target_range_m"]) == {200.0}


def test_manifest_hashes_every_artifact_but_logs(app, tmp_path):
    out = str(tmp_path / "gdop")
    app.run(["gdop", "--out", out])

    manifest = _manifest(out)

    paths = [a["path"] for a in manifest["artifacts"]]
    assert paths == ["gdop.csv"]
    assert manifest["artifacts"][0]["sha256"] == ManifestWriter.sha256(os.path.join(out, "gdop.csv"))
    assert os.path.isfile(os.path.join(out, "logs", "run.log"))
    assert manifest["command"] == "gdop"


def test_invalid_config_exits_one_without_output(app, tmp_path, small_scenario_dict, write_config):
    small_scenario_dict["waveform"]["scs"] = 0
    out = tmp_path / "never"

    assert app.run(["simulate", write_config(small_scenario_dict), "--out", str(out)]) == EXIT_CONFIG
    assert not out.exists()


def test_missing_config_exits_one(app, tmp_path):
    assert app.run(["coverage", str(tmp_path / "nope.json"), "--out", str(tmp_path / "cov")]) == EXIT_CONFIG


def test_simulate_is_byte_reproducible(app, tmp_path, small_scenario_dict, write_config):
    config = write_config(small_scenario_dict)
    outs = [str(tmp_path / "a"), str(tmp_path / "b")]

    for out in outs:
        assert app.run(["simulate", config, "--out", out]) == EXIT_OK

    for name in ("truth.csv", "detections.csv", "tracks.csv", "report.json"):
        with open(os.path.join(outs[0], name), "rb") as a, open(os.path.join(outs[1], name), "rb") as b:
            assert a.read() == b.read(), f"{name} differs between identical runs"


def test_simulate_debug_dumps(app, tmp_path, small_scenario_dict, write_config):
    small_scenario_dict["run"]["n_cpis"] = 2
    out = str(tmp_path / "dump")

    assert app.run(["simulate", write_config(small_scenario_dict), "--out", out, "--dump-tensors", "--dump-rd"]) == EXIT_OK

    tensor_path = os.path.join(out, "tensors", "cpi_0001.bin")
    assert os.path.getsize(tensor_path) == 12 + 4 * 64 * 128 * 8
    rd = pd.read_csv(os.path.join(out, "rd", "cpi_0000.csv"))
    assert rd.shape == (64, 1 + 128)
    assert rd.columns[0] == "range_sum_m"
    detections = pd.read_csv(os.path.join(out, "detections.csv"))
    assert list(detections.columns[:7]) == ["cpi", "i", "j", "range_sum_m", "doppler_hz", "power", "snr_db"]
    assert "tensors/cpi_0000.bin" in [a["path"] for a in _manifest(out)["artifacts"]]


def test_seed_precedence(tmp_path, monkeypatch, small_scenario_dict, write_config):
    config = write_config(small_scenario_dict)
    monkeypatch.setenv("ISAC_AIRSPACE_SEED", "123")
    app = CommandLineApp(SettingsManager(str(tmp_path / "missing.env")))
    small_scenario_dict["run"]["n_cpis"] = 1
    config = write_config(small_scenario_dict)

    app.run(["simulate", config, "--out", str(tmp_path / "env")])
    app.run(["simulate", config, "--seed", "5", "--out", str(tmp_path / "cli")])

    assert _manifest(str(tmp_path / "env"))["seed"] == 123
    assert _manifest(str(tmp_path / "cli"))["seed"] == 5


def test_coverage_2d_csv(app, tmp_path, small_scenario_dict, write_config):
    out = str(tmp_path / "cov2")

    assert app.run(["coverage", write_config(small_scenario_dict), "--out", out]) == EXIT_OK

    frame = pd.read_csv(os.path.join(out, "coverage.csv"))
    assert len(frame) == 400
    assert set(frame["covered"].unique()) <= {0, 1}
    with open(os.path.join(out, "coverage_summary.json"), encoding="utf-8") as f:
        assert json.load(f)["dim"] == 2


def test_coverage_3d_binary_header(app, tmp_path, small_scenario_dict, write_config):
    out = str(tmp_path / "cov3")

    assert app.run(["coverage", write_config(small_scenario_dict), "--dim", "3", "--mode", "beam", "--out", out]) == EXIT_OK

    path = os.path.join(out, "coverage.bin")
    header, data = BinaryExporter.read_coverage(path)
    assert (int(header["nx"]), int(header["ny"]), int(header["nz"])) == (10, 10, 10)
    assert float(header["spacing"]) == pytest.approx(10.0)
    assert os.path.getsize(path) == COVERAGE_HEADER.itemsize + 1000 * 4
    assert data.shape == (10, 10, 10)


def test_sweep_rows_follow_product_order(app, tmp_path, small_scenario_dict, write_config):
    small_scenario_dict["run"]["n_cpis"] = 2
    out = str(tmp_path / "sweep")

    code = app.run(["sweep", write_config(small_scenario_dict), "--bandwidths", "1.92e6", "3.84e6",
                    "--pfas", "1e-4", "--seeds", "1", "2", "--jobs", "1", "--out", out])

    assert code == EXIT_OK
    frame = pd.read_csv(os.path.join(out, "rmse.csv"))
    assert list(zip(frame["bandwidth_hz"], frame["seed"])) == [(1.92e6, 1), (1.92e6, 2), (3.84e6, 1), (3.84e6, 2)]


def test_sweep_with_sub_carrier_bandwidth_is_a_config_error(app, tmp_path, small_scenario_dict, write_config):
    out = tmp_path / "sweep"

    code = app.run(["sweep", write_config(small_scenario_dict), "--bandwidths", "1e3",
                    "--pfas", "1e-4", "--seeds", "1", "--out", str(out)])

    assert code == EXIT_CONFIG
    assert not out.exists()


def test_log_level_setting_is_applied(tmp_path, monkeypatch):
    for key in SettingsManager.KEYS:
        monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("ISAC_AIRSPACE_LOG_LEVEL", "warning")
    previous = logger.level
    app = CommandLineApp(SettingsManager(str(tmp_path / "missing.env")))

    try:
        assert app.run(["gdop", "--preset", "tdoa", "--out", str(tmp_path / "gdop")]) == EXIT_OK
        assert logger.level == logging.WARNING
    finally:
        logger.setLevel(previous)


def test_coverage_jobs_do_not_change_the_grid(app, tmp_path, small_scenario_dict, write_config):
    config = write_config(small_scenario_dict)
    serial, parallel = str(tmp_path / "serial"), str(tmp_path / "parallel")

    assert app.run(["coverage", config, "--dim", "3", "--jobs", "1", "--out", serial]) == EXIT_OK
    assert app.run(["coverage", config, "--dim", "3", "--jobs", "2", "--out", parallel]) == EXIT_OK

    _, a = BinaryExporter.read_coverage(os.path.join(serial, "coverage.bin"))
    _, b = BinaryExporter.read_coverage(os.path.join(parallel, "coverage.bin"))
    np.testing.assert_array_equal(a, b)
