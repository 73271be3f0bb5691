import copy
import json

import numpy as np
import pytest

from src.application.services.scenario_service import ScenarioService

# Reduced numerology so a full CPI tensor stays a few hundred kilobytes.
SMALL_SCENARIO = {
    "waveform": {"n_subcarriers": 64, "n_symbols_per_cpi": 128, "tx_power": 1000.0},
    "stations": [
        {"id": "bs-tx", "position": [0.0, 0.0, 25.0], "role": "transmitter", "array": {"nx": 1, "ny": 1}},
        {"id": "bs-rx", "position": [500.0, 0.0, 25.0], "role": "receiver",
         "array": {"nx": 2, "ny": 2, "boresight_elevation": 90.0}},
    ],
    "fleet": {
        "uavs": [
            {"id": "uav-a", "initial_position": [250.0, 250.0, 100.0], "initial_velocity": [0.0, -30.0, 0.0]},
        ],
    },
    "clutter": {"n_scatterers": 0},
    "run": {
        "n_cpis": 4,
        "cpi_interval": 0.1,
        "seed": 7,
        "cfar": {"guard_range": 1, "guard_doppler": 1, "train_range": 4, "train_doppler": 4, "pfa": 1e-4},
        "aoa": {"n_snapshots": 4, "az_half_span": 180.0, "el_min": 0.0, "el_max": 90.0, "step_deg": 2.0},
        "coverage": {"extent_2d": 400.0, "spacing_2d": 20.0, "extent_3d": 100.0, "spacing_3d": 10.0},
    },
}


@pytest.fixture
def small_scenario_dict():
    return copy.deepcopy(SMALL_SCENARIO)


@pytest.fixture
def small_scenario_text(small_scenario_dict):
    return json.dumps(small_scenario_dict)


@pytest.fixture
def scenario_service():
    return ScenarioService()


@pytest.fixture
def small_scenario(scenario_service, small_scenario_text):
    return scenario_service.load_scenario(small_scenario_text)


@pytest.fixture
def write_config(tmp_path):
    """Writes a scenario dict to a JSON file and returns its path."""

    def _write(data: dict, name: str = "scenario.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
