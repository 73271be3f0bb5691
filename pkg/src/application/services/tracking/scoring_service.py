from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from src.core.logger import logger
from src.domain.models.sensing.trajectory_state import TrajectoryState
from src.domain.models.tracking.track_report import TrackReport
from src.domain.models.tracking.track_snapshot import TrackSnapshot


class ScoringService:
    """Track-to-truth matching and the accuracy/ambiguity metrics of a run."""

    def __init__(self, match_radius: float = 50.0):
        self.match_radius = match_radius

    def score(
        self,
        history: Sequence[Sequence[TrackSnapshot]],
        truth: Sequence[Mapping[str, TrajectoryState]],
    ) -> TrackReport:
        """
        Args:
            history: per CPI, the snapshots of every track alive at the end of that CPI.
            truth: per CPI, the true UAV states keyed by UAV id.

        Each confirmed (or coasting) track is matched to its nearest truth target within
        the match radius. A swap is counted when a track's matched truth id differs from
        the id it was last matched to.
        """
        if len(history) != len(truth):
            raise ValueError("history and truth must cover the same CPIs")

        report = TrackReport()
        last_match: Dict[int, str] = {}
        ever_matched: Dict[int, bool] = {}
        squared_errors: List[float] = []
        nees_values: List[float] = []
        swaps = 0

        for cpi, (snapshots, states) in enumerate(zip(history, truth)):
            ids = list(states.keys())
            positions = np.array([states[k].position for k in ids]).reshape(-1, 3)
            cpi_errors = []
            covered = set()

            for snap in snapshots:
                if not snap.status.is_confirmed:
                    continue
                ever_matched.setdefault(snap.track_id, False)
                match = self._nearest(snap.position, ids, positions)
                report.histories.setdefault(snap.track_id, []).append((cpi, match))
                if match is None:
                    continue

                ever_matched[snap.track_id] = True
                covered.add(match)
                error = snap.position - states[match].position
                cpi_errors.append(float(error @ error))
                nees_values.append(float(error @ np.linalg.solve(snap.position_cov, error)))
                previous = last_match.get(snap.track_id)
                if previous is not None and previous != match:
                    swaps += 1
                last_match[snap.track_id] = match

            squared_errors.extend(cpi_errors)
            report.rmse_series.append(float(np.sqrt(np.mean(cpi_errors))) if cpi_errors else None)
            report.swap_series.append(swaps)
            report.completeness_series.append(len(covered) / len(ids) if ids else 1.0)

        report.swap_count = swaps
        report.rmse_m = float(np.sqrt(np.mean(squared_errors))) if squared_errors else None
        report.completeness = float(np.mean(report.completeness_series)) if report.completeness_series else 0.0
        report.false_track_count = sum(1 for matched in ever_matched.values() if not matched)
        report.mean_nees = float(np.mean(nees_values)) if nees_values else None

        logger.info(
            f"[{self.__class__.__name__}] ✅ RMSE {report.rmse_m}, swaps {report.swap_count}, "
            f"completeness {report.completeness:.3f}"
        )
        return report

    # --- HELPERS ---

    def _nearest(self, position: np.ndarray, ids: List[str], positions: np.ndarray) -> Optional[str]:
        if not ids:
            return None
        distances = np.linalg.norm(positions - position, axis=1)
        k = int(np.argmin(distances))
        return ids[k] if distances[k] <= self.match_radius else None
