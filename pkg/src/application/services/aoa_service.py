import time
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.ndimage import maximum_filter

from src.application.utils.array_helper import ArrayHelper
from src.application.utils.geometry_helper import GeometryHelper
from src.core.exceptions import EstimationError
from src.core.logger import logger
from src.domain.models.scenario.processing_settings import AoaSettings
from src.domain.models.scenario.upa_config import UpaConfig
from src.domain.models.sensing.array_snapshot import ArraySnapshot
from src.domain.models.sensing.echo_tensor import EchoTensor
from src.domain.models.sensing.spatial_spectrum import AoaEstimate, AoaResult, SpatialSpectrum


class AoaService:
    """MUSIC direction finding on receive-array snapshots taken at detected RD bins."""

    def __init__(self, settings: Optional[AoaSettings] = None):
        self.settings = settings or AoaSettings()

    @staticmethod
    def steering_vector(a: UpaConfig, azimuth: float, elevation: float, wavelength: float) -> np.ndarray:
        """
        Unit-modulus steering vector, phase 2pi/lambda * (element position . direction).
        Element positions are spacing * wavelength from the array centre, so the
        result depends on geometry only through the spacing in wavelengths.
        """
        if wavelength <= 0:
            raise ValueError("wavelength must be > 0")
        return ArrayHelper.steering(a, GeometryHelper.direction(azimuth, elevation))

    def grid_for(self, a: UpaConfig) -> Tuple[np.ndarray, np.ndarray]:
        """Azimuth and elevation axes (deg) over the configured field of view of an array."""
        s = self.settings
        az = a.boresight_azimuth + np.arange(-s.az_half_span, s.az_half_span + s.step_deg / 2, s.step_deg)
        el = np.arange(s.el_min, s.el_max + s.step_deg / 2, s.step_deg)
        return az, el

    @staticmethod
    def bin_snapshots(tensor: EchoTensor, bin: Tuple[int, int], n_snapshots: int) -> List[ArraySnapshot]:
        """
        Splits the M symbols into n_snapshots equal groups and evaluates, per element,
        the single-bin 2D DFT at (i, j) over each group's sub-matrix.
        """
        _, n, m = tensor.shape
        i, j = bin
        if not (0 <= i < n and 0 <= j < m):
            raise EstimationError(f"bin {bin} outside map {(n, m)}")
        if n_snapshots < 1 or m % n_snapshots != 0:
            raise EstimationError(f"{m} symbols cannot be split into {n_snapshots} groups")

        delay_kernel = np.exp(2j * np.pi * np.arange(n) * i / n)
        doppler_kernel = np.exp(-2j * np.pi * np.arange(m) * j / m)
        per_symbol = np.einsum("qnm,n->qm", tensor.data, delay_kernel) * doppler_kernel

        group_len = m // n_snapshots
        return [
            ArraySnapshot(values=per_symbol[:, g * group_len:(g + 1) * group_len].sum(axis=1), group=g)
            for g in range(n_snapshots)
        ]

    def music_spectrum(
        self,
        snapshots: Sequence[ArraySnapshot],
        n_sources: int,
        array: UpaConfig,
        grid: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    ) -> SpatialSpectrum:
        x = np.column_stack([s.values for s in snapshots])
        q_count, k = x.shape
        if k < n_sources + 1:
            raise EstimationError(f"{k} snapshots for {n_sources} sources; need at least {n_sources + 1}")
        if not 0 < n_sources < q_count:
            raise EstimationError(f"n_sources must be in [1, {q_count - 1}]")

        r = x @ x.conj().T / k
        trace = float(np.real(np.trace(r)))
        if trace <= 0:
            raise EstimationError("snapshots carry no energy")
        # trace normalisation, then diagonal loading eps * trace / Q
        r = r / trace + (self.settings.diagonal_loading / q_count) * np.eye(q_count)

        eigvals, eigvecs = np.linalg.eigh(r)
        if eigvals[0] < -1e-9 * max(eigvals[-1], 1.0):
            raise EstimationError("sample covariance is not positive semi-definite")
        noise_subspace = eigvecs[:, : q_count - n_sources]

        az, el = grid if grid is not None else self.grid_for(array)
        el_mesh, az_mesh = np.meshgrid(el, az, indexing="ij")
        steering = ArrayHelper.steering(array, GeometryHelper.direction(az_mesh, el_mesh))
        projection = np.abs(steering.conj() @ noise_subspace) ** 2
        denom = projection.sum(axis=-1)
        values = 1.0 / np.maximum(denom, np.finfo(float).tiny)
        return SpatialSpectrum(azimuths=np.asarray(az, dtype=float), elevations=np.asarray(el, dtype=float), values=values)

    def estimate_aoa(self, spectrum: SpatialSpectrum, n_sources: int) -> AoaResult:
        """The n_sources strongest local maxima, refined by quadratic interpolation on the dB spectrum."""
        values = spectrum.values
        peaks = np.argwhere(maximum_filter(values, size=3, mode="nearest") == values)
        order = np.argsort(-values[peaks[:, 0], peaks[:, 1]], kind="stable")
        peaks = peaks[order][:n_sources]

        log_values = 10 * np.log10(np.maximum(values, np.finfo(float).tiny))
        az_step, el_step = spectrum.step
        estimates = []
        for ie, ia in peaks:
            d_az = self._parabolic(log_values[ie, :], ia)
            d_el = self._parabolic(log_values[:, ia], ie)
            estimates.append(AoaEstimate(
                azimuth=float(spectrum.azimuths[ia] + d_az * az_step),
                elevation=float(spectrum.elevations[ie] + d_el * el_step),
                value=float(values[ie, ia]),
            ))

        incomplete = len(estimates) < n_sources
        if incomplete:
            logger.warning(f"[{self.__class__.__name__}] ⚠️ Only {len(estimates)} of {n_sources} spectrum peaks found")
        return AoaResult(estimates=estimates, incomplete=incomplete)

    def locate_direction(self, tensor: EchoTensor, bin: Tuple[int, int], array: UpaConfig) -> AoaResult:
        """Snapshots at one detected bin -> MUSIC -> peak search, using the configured settings."""
        start = time.perf_counter()
        snapshots = self.bin_snapshots(tensor, bin, self.settings.n_snapshots)
        spectrum = self.music_spectrum(snapshots, self.settings.n_sources, array)
        result = self.estimate_aoa(spectrum, self.settings.n_sources)
        elapsed = time.perf_counter() - start
        logger.debug(f"[{self.__class__.__name__}] AoA at bin {bin}: {result.estimates[:1]} ({elapsed:.4f}s)")
        return result

    # --- HELPERS ---

    @staticmethod
    def _parabolic(profile: np.ndarray, k: int) -> float:
        if k == 0 or k == profile.size - 1:
            return 0.0
        left, centre, right = profile[k - 1], profile[k], profile[k + 1]
        denom = left - 2 * centre + right
        if denom >= 0:
            return 0.0
        return float(np.clip(0.5 * (left - right) / denom, -0.5, 0.5))
