import numpy as np
import pytest
import scipy.fft

from src.application.services.aoa_service import AoaService
from src.core.exceptions import EstimationError
from src.domain.models.scenario.processing_settings import AoaSettings
from src.domain.models.scenario.upa_config import UpaConfig
from src.domain.models.scenario.waveform_config import WaveformConfig
from src.domain.models.sensing.array_snapshot import ArraySnapshot
from src.domain.models.sensing.echo_tensor import EchoTensor

WAVELENGTH = WaveformConfig().wavelength
N, M = 32, 16


@pytest.fixture
def aoa():
    return AoaService(AoaSettings(diagonal_loading=1e-6))


@pytest.fixture
def ula():
    return UpaConfig(nx=8, ny=1)


def _snapshots(array, directions, k, rng):
    """k noiseless snapshots of independent random-amplitude sources."""
    steering = np.column_stack([AoaService.steering_vector(array, az, el, WAVELENGTH) for az, el in directions])
    amplitudes = rng.standard_normal((len(directions), k)) + 1j * rng.standard_normal((len(directions), k))
    x = steering @ amplitudes
    return [ArraySnapshot(values=x[:, g], group=g) for g in range(k)]


def _point_target_tensor(steering, i0, j0):
    tone = np.outer(np.exp(-2j * np.pi * np.arange(N) * i0 / N), np.exp(2j * np.pi * np.arange(M) * j0 / M))
    data = (steering[:, None, None] * tone[None]).astype(np.complex64)
    return EchoTensor(data=data, cpi_index=0, waveform=WaveformConfig(n_subcarriers=N, n_symbols_per_cpi=M))


def test_boresight_steering_is_all_ones():
    s = AoaService.steering_vector(UpaConfig(nx=4, ny=4), 0.0, 0.0, WAVELENGTH)

    np.testing.assert_allclose(s, np.ones(16), atol=1e-12)


def test_steering_has_unit_modulus():
    s = AoaService.steering_vector(UpaConfig(nx=8, ny=8), 33.0, -12.0, WAVELENGTH)

    np.testing.assert_allclose(np.abs(s), 1.0, atol=1e-12)


def test_ula_steering_conjugate_symmetry(ula):
    np.testing.assert_allclose(np.conj(AoaService.steering_vector(ula, 25.0, 0.0, WAVELENGTH)),
                               AoaService.steering_vector(ula, -25.0, 0.0, WAVELENGTH), atol=1e-12)


def test_non_positive_wavelength_is_rejected(ula):
    with pytest.raises(ValueError):
        AoaService.steering_vector(ula, 0.0, 0.0, 0.0)


def test_point_target_snapshots_follow_steering(ula):
    steering = AoaService.steering_vector(ula, 20.0, 0.0, WAVELENGTH)
    tensor = _point_target_tensor(steering, 5, 3)

    snapshots = AoaService.bin_snapshots(tensor, (5, 3), 4)

    assert len(snapshots) == 4
    for snap in snapshots:
        np.testing.assert_allclose(snap.values, steering * N * (M // 4), rtol=1e-4)


def test_single_snapshot_equals_rd_bin_value(ula, rng):
    data = (rng.standard_normal((8, N, M)) + 1j * rng.standard_normal((8, N, M))).astype(np.complex64)
    tensor = EchoTensor(data=data, cpi_index=0, waveform=WaveformConfig(n_subcarriers=N, n_symbols_per_cpi=M))

    snapshot = AoaService.bin_snapshots(tensor, (7, 11), 1)[0]

    expected = scipy.fft.fft(scipy.fft.ifft(data.astype(np.complex128), axis=1) * N, axis=2)[:, 7, 11]
    np.testing.assert_allclose(snapshot.values, expected, rtol=1e-4, atol=1e-3)


def test_snapshot_energy_grows_linearly_with_group_length(ula):
    tensor = _point_target_tensor(AoaService.steering_vector(ula, 10.0, 0.0, WAVELENGTH), 2, 1)

    def energy(groups):
        return sum(np.sum(np.abs(s.values) ** 2) for s in AoaService.bin_snapshots(tensor, (2, 1), groups))

    # group length 4 vs 1
    assert energy(4) / energy(16) == pytest.approx(4.0, rel=1e-5)


def test_uneven_grouping_is_rejected(ula):
    tensor = _point_target_tensor(np.ones(8), 0, 0)

    with pytest.raises(EstimationError):
        AoaService.bin_snapshots(tensor, (0, 0), 3)


def test_out_of_range_bin_is_rejected(ula):
    tensor = _point_target_tensor(np.ones(8), 0, 0)

    with pytest.raises(EstimationError):
        AoaService.bin_snapshots(tensor, (N, 0), 4)


def test_noiseless_rank_one_covariance(ula, rng):
    x = np.column_stack([s.values for s in _snapshots(ula, [(30.0, 0.0)], 6, rng)])

    eigvals = np.linalg.eigvalsh(x @ x.conj().T)

    assert np.sum(eigvals > 1e-9 * eigvals.max()) == 1


def test_ula_music_peaks_at_true_azimuth(aoa, ula, rng):
    grid = (np.arange(-90.0, 91.0, 1.0), np.array([0.0]))

    spectrum = aoa.music_spectrum(_snapshots(ula, [(30.0, 0.0)], 4, rng), 1, ula, grid=grid)
    result = aoa.estimate_aoa(spectrum, 1)

    assert spectrum.values.shape == (1, 181)
    assert spectrum.azimuths[np.argmax(spectrum.values[0])] == 30.0
    assert abs(result.estimates[0].azimuth - 30.0) <= 1.0
    assert not result.incomplete


def test_upa_music_resolves_two_sources(aoa, rng):
    array = UpaConfig(nx=8, ny=8)
    truths = [(-20.0, 10.0), (25.0, 30.0)]
    grid = (np.arange(-60.0, 61.0, 1.0), np.arange(-10.0, 61.0, 1.0))

    spectrum = aoa.music_spectrum(_snapshots(array, truths, 16, rng), 2, array, grid=grid)
    result = aoa.estimate_aoa(spectrum, 2)

    assert len(result.estimates) == 2
    for az, el in truths:
        assert any(abs(e.azimuth - az) <= 1.0 and abs(e.elevation - el) <= 1.0 for e in result.estimates), \
            f"no estimate near ({az}, {el})"


def test_spectrum_is_invariant_to_snapshot_scaling(aoa, ula, rng):
    snapshots = _snapshots(ula, [(-15.0, 0.0)], 4, rng)
    scaled = [ArraySnapshot(values=(2 + 3j) * s.values, group=s.group) for s in snapshots]
    grid = (np.arange(-90.0, 91.0, 2.0), np.array([0.0]))

    np.testing.assert_allclose(aoa.music_spectrum(scaled, 1, ula, grid=grid).values,
                               aoa.music_spectrum(snapshots, 1, ula, grid=grid).values, rtol=1e-6)


def test_too_few_snapshots_for_sources(aoa, ula, rng):
    with pytest.raises(EstimationError):
        aoa.music_spectrum(_snapshots(ula, [(0.0, 0.0)], 2, rng), 2, ula)


def test_default_grid_covers_field_of_view():
    service = AoaService(AoaSettings(az_half_span=60.0, el_min=0.0, el_max=45.0, step_deg=5.0))

    az, el = service.grid_for(UpaConfig(boresight_azimuth=90.0))

    assert az[0] == pytest.approx(30.0) and az[-1] == pytest.approx(150.0)
    assert el[0] == pytest.approx(0.0) and el[-1] == pytest.approx(45.0)


def test_upa_music_accuracy_over_noise_realisations(aoa):
    # 1. SETUP
    array = UpaConfig(nx=4, ny=4)
    truth = (20.0, 15.0)
    grid = (np.arange(-60.0, 61.0, 1.0), np.arange(-30.0, 61.0, 1.0))
    steering = AoaService.steering_vector(array, *truth, WAVELENGTH)
    # noise power 1/100 of the source power per element
    noise_sigma = np.sqrt(0.01)
    hits = 0

    # 2. ACTION
    for seed in range(100):
        rng = np.random.default_rng(seed)
        source = (rng.standard_normal(16) + 1j * rng.standard_normal(16)) / np.sqrt(2)
        noise = noise_sigma * (rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))) / np.sqrt(2)
        x = steering[:, None] * source[None, :] + noise
        snapshots = [ArraySnapshot(values=x[:, g], group=g) for g in range(16)]
        estimate = aoa.estimate_aoa(aoa.music_spectrum(snapshots, 1, array, grid=grid), 1).estimates[0]
        hits += abs(estimate.azimuth - truth[0]) <= 2.0 and abs(estimate.elevation - truth[1]) <= 2.0

    # 3. VERIFICATION
    assert hits >= 95, f"within two grid steps in {hits}/100 realisations"
