from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.domain.models.coverage.coverage_grid import CoverageGrid
from src.domain.models.locate.gdop_curve import GdopCurve
from src.domain.models.run.run_summary import RunSummary
from src.domain.models.run.simulation_result import SimulationResult

TRUTH_COLUMNS = ["cpi", "uav_id", "x", "y", "z", "vx", "vy", "vz"]
DETECTION_COLUMNS = [
    "cpi", "i", "j", "range_sum_m", "doppler_hz", "power", "snr_db",
    "range_sum_refined", "doppler_refined", "beam", "azimuth", "elevation", "x", "y", "z",
]
TRACK_COLUMNS = ["cpi", "track_id", "status", "x", "y", "z", "vx", "vy", "vz", "matched_truth_id"]
RMSE_COLUMNS = ["bandwidth_hz", "pfa", "seed", "rmse_m", "swap_count", "completeness"]
GDOP_COLUMNS = ["azimuth_deg", "gdop_m", "preset", "target_range_m"]
COVERAGE_COLUMNS = ["x", "y", "snr_db", "covered"]


class RowMapper:
    """Domain results -> pandas frames with the fixed CSV schemas."""

    @staticmethod
    def truth_frame(result: SimulationResult) -> pd.DataFrame:
        rows = [
            [cpi, uid, *s.position, *s.velocity]
            for cpi, states in enumerate(result.truth)
            for uid, s in sorted(states.items())
        ]
        return pd.DataFrame(rows, columns=TRUTH_COLUMNS)

    @staticmethod
    def detection_frame(result: SimulationResult) -> pd.DataFrame:
        rows = []
        for ld in result.detections:
            d = ld.detection
            position = ld.fix.position if ld.fix is not None else (None, None, None)
            rows.append([
                d.cpi, d.i, d.j, d.range_sum, d.doppler, d.power, d.snr_est,
                d.range_sum_refined, d.doppler_refined, d.beam, ld.azimuth, ld.elevation, *position,
            ])
        return pd.DataFrame(rows, columns=DETECTION_COLUMNS)

    @staticmethod
    def track_frame(result: SimulationResult) -> pd.DataFrame:
        matches: Dict[Tuple[int, int], Optional[str]] = {
            (track_id, cpi): truth_id
            for track_id, entries in result.report.histories.items()
            for cpi, truth_id in entries
        }
        rows = [
            [s.cpi, s.track_id, s.status.value, *s.position, *s.velocity, matches.get((s.track_id, s.cpi))]
            for snapshots in result.history
            for s in snapshots
        ]
        return pd.DataFrame(rows, columns=TRACK_COLUMNS)

    @staticmethod
    def summary_frame(summaries: List[RunSummary]) -> pd.DataFrame:
        rows = [[s.bandwidth_hz, s.pfa, s.seed, s.rmse_m, s.swap_count, s.completeness] for s in summaries]
        return pd.DataFrame(rows, columns=RMSE_COLUMNS)

    @staticmethod
    def gdop_frame(curves: List[GdopCurve]) -> pd.DataFrame:
        frames = [
            pd.DataFrame({
                "azimuth_deg": c.azimuth_deg,
                "gdop_m": c.gdop_m,
                "preset": c.preset,
                "target_range_m": c.target_range_m,
            })
            for c in curves
        ]
        return pd.concat(frames, ignore_index=True)[GDOP_COLUMNS]

    @staticmethod
    def coverage_frame(grid: CoverageGrid) -> pd.DataFrame:
        """2D slice rows, x fastest."""
        xs, ys, _ = grid.spec.axes()
        yy, xx = np.meshgrid(ys, xs, indexing="ij")
        return pd.DataFrame({
            "x": xx.ravel(),
            "y": yy.ravel(),
            "snr_db": grid.snr_db[0].ravel(),
            "covered": grid.covered[0].ravel().astype(int),
        })[COVERAGE_COLUMNS]

    @staticmethod
    def rd_frame(power: np.ndarray, range_axis: np.ndarray, doppler_axis: np.ndarray) -> pd.DataFrame:
        """
        Wide RD matrix: one row per range bin, first column `range_sum_m`, then one
        column per Doppler bin in fftshift order headed by its Doppler value (Hz).
        Cells are power in dB.
        """
        shifted = np.fft.fftshift(power, axes=1)
        doppler = np.fft.fftshift(doppler_axis)
        power_db = 10 * np.log10(np.maximum(shifted, np.finfo(float).tiny))
        frame = pd.DataFrame(power_db, columns=[f"{v:.9g}" for v in doppler])
        frame.insert(0, "range_sum_m", range_axis)
        return frame
