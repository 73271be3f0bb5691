from dataclasses import dataclass

import numpy as np

from src.domain.enums.track_status import TrackStatus


@dataclass(frozen=True, eq=False)
class TrackSnapshot:
    """One track as it stood at the end of one CPI."""

    cpi: int
    track_id: int
    status: TrackStatus
    position: np.ndarray
    velocity: np.ndarray
    position_cov: np.ndarray
