import dataclasses
import json

import numpy as np
import pytest

from src.application.services.airlink_service import AirlinkService
from src.application.utils.geometry_helper import GeometryHelper
from src.core.exceptions import GeometryError
from src.domain.models.scenario.upa_config import UpaConfig
from src.domain.models.scenario.waveform_config import WaveformConfig
from src.domain.models.sensing.trajectory_state import TrajectoryState


def _target(p, v=(0.0, 0.0, 0.0), uav_id="uav-a"):
    return TrajectoryState(time=0.0, position=np.array(p, dtype=float), velocity=np.array(v, dtype=float), uav_id=uav_id)


@pytest.fixture
def airlink():
    return AirlinkService()


def test_stationary_target_has_zero_doppler(airlink):
    g = airlink.geometry([0, 0, 0], [500, 0, 0], _target((250, 250, 100)), 0.0857)

    assert g.doppler == 0.0
    assert g.range_sum == pytest.approx(734.85, abs=0.01)


def test_monostatic_closing_doppler(airlink):
    wavelength = WaveformConfig().wavelength

    g = airlink.geometry([0, 0, 0], [0, 0, 0], _target((100, 0, 0), (-20, 0, 0)), wavelength)

    assert g.doppler == pytest.approx(40.0 / wavelength, rel=1e-12)
    assert g.doppler == pytest.approx(466.7, abs=1.0)
    assert g.baseline == 0.0


def test_target_on_bisector_is_equidistant(airlink):
    g = airlink.geometry([0, 0, 0], [500, 0, 0], _target((250, -80, 60)), 0.0857)

    assert g.d_tx == pytest.approx(g.d_rx)


def test_range_sum_respects_triangle_inequality(airlink, rng):
    tx, rx = np.array([0.0, 0.0, 25.0]), np.array([500.0, 0.0, 25.0])
    for p in rng.uniform(-1000, 1000, size=(200, 3)):
        g = airlink.geometry(tx, rx, _target(p), 0.0857)
        assert g.range_sum >= g.baseline - 1e-9


def test_target_on_station_is_a_geometry_error(airlink):
    with pytest.raises(GeometryError):
        airlink.geometry([0, 0, 0], [500, 0, 0], _target((500, 0, 0)), 0.0857)


def test_single_element_gain_is_one(airlink):
    assert airlink.upa_gain(UpaConfig(nx=1, ny=1), 37.0, 12.0) == pytest.approx(1.0)


def test_boresight_gain_equals_element_count(airlink):
    assert airlink.upa_gain(UpaConfig(nx=2, ny=2), 0.0, 0.0) == pytest.approx(4.0)
    assert airlink.upa_gain(UpaConfig(nx=8, ny=8), 0.0, 0.0) == pytest.approx(64.0)


def test_gain_never_exceeds_boresight(airlink):
    array = UpaConfig(nx=8, ny=8)
    az, el = np.meshgrid(np.arange(-180, 180, 3.0), np.arange(-90, 91, 3.0))

    assert np.max(airlink.upa_gain(array, az, el)) <= 64.0 + 1e-9


def test_swapping_array_axes_mirrors_the_pattern(airlink, rng):
    # face axes for a horizontal face looking up: h = +y, v = -x
    wide = UpaConfig(nx=4, ny=2, boresight_elevation=90.0)
    tall = UpaConfig(nx=2, ny=4, boresight_elevation=90.0)
    for d in rng.normal(size=(50, 3)):
        d = d / np.linalg.norm(d)
        mirrored = np.array([-d[1], -d[0], d[2]])
        az, el = GeometryHelper.az_el(d)
        az_m, el_m = GeometryHelper.az_el(mirrored)
        assert airlink.upa_gain(wide, az, el) == pytest.approx(airlink.upa_gain(tall, az_m, el_m), rel=1e-9, abs=1e-12)


def test_snr_drops_six_db_per_doubled_distance(airlink):
    w = WaveformConfig()
    base = airlink.geometry([0, 0, 0], [0, 0, 0], _target((500, 0, 0)), w.wavelength)
    far = dataclasses.replace(base, d_tx=2 * base.d_tx)
    both = dataclasses.replace(base, d_tx=2 * base.d_tx, d_rx=2 * base.d_rx)

    ref = airlink.bistatic_snr(w, base, (1.0, 1.0), 0.01).snr_single_sample

    assert airlink.bistatic_snr(w, far, (1.0, 1.0), 0.01).snr_single_sample - ref == pytest.approx(-6.0206, abs=1e-3)
    assert airlink.bistatic_snr(w, both, (1.0, 1.0), 0.01).snr_single_sample - ref == pytest.approx(-12.0412, abs=1e-3)


def test_reference_link_budget(airlink):
    w = WaveformConfig(tx_power=1.0)
    g = airlink.geometry([0, 0, 0], [0, 0, 0], _target((500, 0, 0)), w.wavelength)

    budget = airlink.bistatic_snr(w, g, (1.0, 1.0), 0.01)

    assert budget.snr_single_sample == pytest.approx(-68.0, abs=1.0)
    assert budget.integration_gain == pytest.approx(59.3, abs=0.05)
    assert budget.snr_post_integration == pytest.approx(budget.snr_single_sample + budget.integration_gain)


def test_non_positive_gain_is_rejected(airlink):
    w = WaveformConfig()
    g = airlink.geometry([0, 0, 0], [0, 0, 0], _target((500, 0, 0)), w.wavelength)

    with pytest.raises(ValueError):
        airlink.bistatic_snr(w, g, (0.0, 1.0), 0.01)


def test_empty_scene_without_noise_is_all_zero(airlink, small_scenario, rng):
    tensor = airlink.synthesize_cpi(small_scenario, [], rng, include_clutter=False, include_noise=False)

    assert tensor.shape == (4, 64, 128)
    assert tensor.data.dtype == np.complex64
    assert not np.any(tensor.data)


def test_stationary_target_columns_are_identical(airlink, small_scenario, rng):
    tensor = airlink.synthesize_cpi(small_scenario, [_target((250, 250, 100))], rng,
                                    include_clutter=False, include_noise=False)
    h = tensor.data[0]

    np.testing.assert_allclose(h, np.repeat(h[:, :1], h.shape[1], axis=1), rtol=1e-5, atol=1e-9)


def test_subcarrier_phase_slope_follows_delay(airlink, small_scenario, rng):
    w = small_scenario.waveform
    target = _target((250, 250, 100))
    g = airlink.geometry(small_scenario.transmitter.position.as_array(), small_scenario.receiver.position.as_array(),
                         target, w.wavelength)

    h = airlink.synthesize_cpi(small_scenario, [target], rng, include_clutter=False, include_noise=False).data[0]
    ratio = h[1:, 0] / h[:-1, 0]

    np.testing.assert_allclose(ratio / np.abs(ratio), np.exp(-2j * np.pi * w.scs * g.delay), atol=1e-4)


def test_synthesis_is_linear_in_targets(airlink, small_scenario, rng):
    a, b = _target((250, 250, 100), (0, -30, 0)), _target((100, -200, 150), (10, 5, 0))

    def synth(targets):
        return airlink.synthesize_cpi(small_scenario, targets, rng, include_clutter=False, include_noise=False).data

    both = synth([a, b])
    np.testing.assert_allclose(both, synth([a]) + synth([b]), atol=1e-5 * np.max(np.abs(both)))


def test_entry_power_matches_link_budget(airlink, small_scenario, rng):
    w = small_scenario.waveform
    target = _target((250, 250, 100))
    tx, rx = small_scenario.transmitter, small_scenario.receiver
    g = airlink.geometry(tx.position.as_array(), rx.position.as_array(), target, w.wavelength)
    gains = (airlink.upa_gain(tx.array, g.tx_azimuth, g.tx_elevation), airlink.element_gain(rx.array, g.azimuth, g.elevation))

    tensor = airlink.synthesize_cpi(small_scenario, [target], rng, include_clutter=False, include_noise=False)
    expected = airlink.bistatic_snr(w, g, gains, 0.01).snr_single_linear

    assert np.mean(np.abs(tensor.data.astype(np.complex128)) ** 2) == pytest.approx(expected, rel=1e-4)


def test_noise_is_unit_power(airlink, small_scenario, rng):
    tensor = airlink.synthesize_cpi(small_scenario, [], rng, include_clutter=False)

    assert np.mean(np.abs(tensor.data) ** 2) == pytest.approx(1.0, rel=0.02)


def test_clutter_is_calibrated_to_requested_scr(airlink, scenario_service, small_scenario_dict, rng):
    small_scenario_dict["clutter"] = {"n_scatterers": 10, "scr_target": -10.0}
    scn = scenario_service.load_scenario(json.dumps(small_scenario_dict))

    tensor = airlink.synthesize_cpi(scn, [_target((250, 250, 100))], rng, include_noise=False)

    assert tensor.scr_db == pytest.approx(-10.0, abs=1e-6)


def test_same_rng_state_gives_identical_tensors(airlink, small_scenario):
    target = _target((250, 250, 100), (0, -30, 0))
    first = airlink.synthesize_cpi(small_scenario, [target], np.random.default_rng(3))
    second = airlink.synthesize_cpi(small_scenario, [target], np.random.default_rng(3))

    np.testing.assert_array_equal(first.data, second.data)
