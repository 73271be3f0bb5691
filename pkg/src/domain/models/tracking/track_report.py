from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple


@dataclass
class TrackReport:
    rmse_series: List[Optional[float]] = field(default_factory=list)
    rmse_m: Optional[float] = None
    swap_series: List[int] = field(default_factory=list)
    swap_count: int = 0
    completeness_series: List[float] = field(default_factory=list)
    completeness: float = 0.0
    false_track_count: int = 0
    mean_nees: Optional[float] = None
    # track id -> [(cpi, matched truth id)]
    histories: Dict[int, List[Tuple[int, Optional[str]]]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "rmse_series": self.rmse_series,
            "rmse_m": self.rmse_m,
            "swap_series": self.swap_series,
            "swap_count": self.swap_count,
            "completeness_series": self.completeness_series,
            "completeness": self.completeness,
            "false_track_count": self.false_track_count,
            "mean_nees": self.mean_nees,
            "histories": {str(k): [[c, t] for c, t in v] for k, v in sorted(self.histories.items())},
        }
