import time
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Optional

import numpy as np
from tqdm import tqdm

from src.application.services.airlink_service import AirlinkService
from src.application.utils.array_helper import ArrayHelper
from src.application.utils.geometry_helper import GeometryHelper
from src.core.logger import logger
from src.domain.enums.beam_mode import BeamMode
from src.domain.enums.cassini_topology import CassiniTopology
from src.domain.models.coverage.cassini_spec import CassiniSpec
from src.domain.models.coverage.coverage_grid import CoverageGrid
from src.domain.models.coverage.grid_spec import GridSpec
from src.domain.models.scenario.scenario_config import ScenarioConfig
from src.domain.models.scenario.upa_config import UpaConfig


class CoverageService:
    """
    Bistatic sensing coverage. With isotropic radiation the SNR depends on position only
    through d_tx * d_rx, so its level sets are Cassini ovals; directional UPA patterns
    deform them.
    """

    def __init__(self, airlink_service: Optional[AirlinkService] = None):
        self.airlink_service = airlink_service or AirlinkService()

    @staticmethod
    def cassini_level(tx: np.ndarray, rx: np.ndarray, p: np.ndarray):
        """d_tx * d_rx; broadcasts over p (..., 3). Symmetric in tx and rx."""
        p = np.asarray(p, dtype=float)
        level = np.linalg.norm(p - np.asarray(tx, dtype=float), axis=-1) * np.linalg.norm(p - np.asarray(rx, dtype=float), axis=-1)
        return float(level) if np.ndim(level) == 0 else level

    @staticmethod
    def cassini_topology(baseline: float, level: float, rtol: float = 1e-9) -> CassiniTopology:
        if baseline <= 0 or level <= 0:
            raise ValueError("baseline and level must be > 0")
        critical = (baseline / 2.0) ** 2
        if abs(level - critical) <= rtol * critical:
            return CassiniTopology.LEMNISCATE
        return CassiniTopology.CONNECTED if level > critical else CassiniTopology.TWO_LOBES

    def reference_spec(self, scn: ScenarioConfig) -> CassiniSpec:
        return CassiniSpec(tx=scn.transmitter.position.as_array(), rx=scn.receiver.position.as_array(),
                           distance_product=scn.run.coverage.reference_level)

    def reference_threshold(self, scn: ScenarioConfig) -> float:
        """Post-integration SNR (dB) of an isotropic link at d_tx * d_rx = reference_level."""
        settings = scn.run.coverage
        if settings.threshold_db is not None:
            return settings.threshold_db
        w = scn.waveform
        d = np.sqrt(settings.reference_level)
        power = self.airlink_service.received_power(w, d, d, 1.0, 1.0, settings.rcs)
        return float(10 * np.log10(power / self.airlink_service.noise_power(w)) + self._integration_gain_db(scn))

    def default_grid(self, scn: ScenarioConfig, dim: int) -> GridSpec:
        """2D slice at the configured altitude or a 3D block above ground, centred on the baseline midpoint."""
        settings = scn.run.coverage
        tx, rx = scn.transmitter.position.as_array(), scn.receiver.position.as_array()
        mid = 0.5 * (tx + rx)
        if dim == 2:
            extent, spacing = settings.extent_2d, settings.spacing_2d
            altitude = settings.slice_altitude if settings.slice_altitude is not None else float(mid[2])
            n = int(round(extent / spacing))
            origin = np.array([mid[0] - extent / 2 + spacing / 2, mid[1] - extent / 2 + spacing / 2, altitude])
            return GridSpec(origin=origin, spacing=spacing, shape=(n, n, 1))
        if dim == 3:
            extent, spacing = settings.extent_3d, settings.spacing_3d
            n = int(round(extent / spacing))
            origin = np.array([mid[0] - extent / 2 + spacing / 2, mid[1] - extent / 2 + spacing / 2, spacing / 2])
            return GridSpec(origin=origin, spacing=spacing, shape=(n, n, n))
        raise ValueError("dim must be 2 or 3")

    def snr_field(
        self,
        scn: ScenarioConfig,
        mode: BeamMode,
        grid_spec: GridSpec,
        threshold_db: Optional[float] = None,
        tx_gain_offset_db: float = 0.0,
        jobs: int = 1,
    ) -> CoverageGrid:
        """
        Post-integration SNR per cell. With jobs > 1 the grid is cut into z planes (3D) or
        y rows (2D) that are evaluated on a process pool; the result does not depend on jobs.
        """
        start = time.perf_counter()
        points = grid_spec.points()
        if jobs > 1:
            axis = 0 if points.shape[0] > 1 else 1
            blocks = np.array_split(points, min(points.shape[axis], 4 * jobs), axis=axis)
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(tqdm(
                    pool.map(snr_block, repeat(scn), repeat(mode), blocks, repeat(tx_gain_offset_db)),
                    total=len(blocks), desc="coverage", unit="block",
                ))
            snr_db = np.concatenate(parts, axis=axis)
        else:
            snr_db = self.snr_at(scn, mode, points, tx_gain_offset_db)

        threshold = self.reference_threshold(scn) if threshold_db is None else threshold_db
        grid = CoverageGrid(spec=grid_spec, snr_db=snr_db, threshold_db=threshold)

        elapsed = time.perf_counter() - start
        logger.info(
            f"[{self.__class__.__name__}] SNR field '{mode.value}' on {grid_spec.shape} with {jobs} jobs: "
            f"{int(grid.covered.sum())} covered cells ({elapsed:.4f}s)"
        )
        return grid

    def snr_at(self, scn: ScenarioConfig, mode: BeamMode, points: np.ndarray, tx_gain_offset_db: float = 0.0) -> np.ndarray:
        """Post-integration SNR (dB) at points (..., 3), vectorised."""
        w = scn.waveform
        tx, rx = scn.transmitter.position.as_array(), scn.receiver.position.as_array()
        to_tx, to_rx = points - tx, points - rx
        d_tx = np.maximum(np.linalg.norm(to_tx, axis=-1), GeometryHelper.EPS)
        d_rx = np.maximum(np.linalg.norm(to_rx, axis=-1), GeometryHelper.EPS)
        if mode == BeamMode.BEAM:
            gt = self._pattern(scn.transmitter.array, to_tx / d_tx[..., None])
            gr = self._pattern(scn.receiver.array, to_rx / d_rx[..., None])
        else:
            gt = gr = np.ones_like(d_tx)
        gt = gt * 10 ** (tx_gain_offset_db / 10)

        power = self.airlink_service.received_power(w, d_tx, d_rx, gt, gr, scn.run.coverage.rcs)
        with np.errstate(divide="ignore"):
            return 10 * np.log10(power / self.airlink_service.noise_power(w)) + self._integration_gain_db(scn)

    @staticmethod
    def coverage_volume(grid: CoverageGrid) -> float:
        """Covered cells times cell volume (m^3), or cell area (m^2) for a 2D slice."""
        return float(np.count_nonzero(grid.covered) * grid.spec.cell_measure)

    def summarize(self, scn: ScenarioConfig, grid: CoverageGrid, mode: BeamMode) -> dict:
        spec = self.reference_spec(scn)
        return {
            "mode": mode.value,
            "dim": 3 if grid.spec.is_3d else 2,
            "shape": list(grid.spec.shape),
            "spacing_m": grid.spec.spacing,
            "threshold_db": grid.threshold_db,
            "covered_cells": int(np.count_nonzero(grid.covered)),
            "covered_measure": self.coverage_volume(grid),
            "reference_level_m2": spec.distance_product,
            "baseline_m": spec.baseline,
            "topology": self.cassini_topology(spec.baseline, spec.distance_product).value,
        }

    # --- HELPERS ---

    @staticmethod
    def _pattern(a: UpaConfig, directions: np.ndarray) -> np.ndarray:
        return ArrayHelper.array_factor_power(a, directions) / a.n_elements * ArrayHelper.element_gain(a, directions)

    @staticmethod
    def _integration_gain_db(scn: ScenarioConfig) -> float:
        return float(10 * np.log10(scn.waveform.n_subcarriers * scn.waveform.n_symbols_per_cpi))


def snr_block(scn: ScenarioConfig, mode: BeamMode, points: np.ndarray, tx_gain_offset_db: float) -> np.ndarray:
    """One block of the coverage grid in a worker process."""
    return CoverageService().snr_at(scn, mode, points, tx_gain_offset_db)
