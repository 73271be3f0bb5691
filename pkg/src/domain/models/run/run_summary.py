from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class RunSummary:
    """One row of rmse.csv."""

    bandwidth_hz: float
    pfa: float
    seed: int
    rmse_m: Optional[float]
    swap_count: int
    completeness: float
