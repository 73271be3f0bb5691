import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

from src.domain.models.locate.located_detection import LocatedDetection
from src.domain.models.scenario.resolution_report import ResolutionReport
from src.domain.models.sensing.trajectory_state import TrajectoryState
from src.domain.models.tracking.track_report import TrackReport
from src.domain.models.tracking.track_snapshot import TrackSnapshot


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    return value if value is not None and math.isfinite(value) else None


@dataclass
class SimulationResult:
    resolution: ResolutionReport
    truth: List[Dict[str, TrajectoryState]] = field(default_factory=list)
    detections: List[LocatedDetection] = field(default_factory=list)
    history: List[List[TrackSnapshot]] = field(default_factory=list)
    scr_db: List[Optional[float]] = field(default_factory=list)
    report: TrackReport = field(default_factory=TrackReport)

    @property
    def confirmed_track_count(self) -> int:
        if not self.history:
            return 0
        return sum(1 for s in self.history[-1] if s.status.is_confirmed)

    def to_report_dict(self) -> dict:
        """report.json body; non-finite values become null."""
        body = self.report.to_dict()
        body.update({
            "n_cpis": len(self.truth),
            "n_truth": len(self.truth[0]) if self.truth else 0,
            "confirmed_tracks": self.confirmed_track_count,
            "detections_per_cpi": [sum(1 for d in self.detections if d.detection.cpi == k) for k in range(len(self.truth))],
            "scr_db": [_finite_or_none(v) for v in self.scr_db],
            "resolution": asdict(self.resolution),
        })
        return body
