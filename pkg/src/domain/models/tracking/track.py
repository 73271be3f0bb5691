from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.domain.enums.track_status import TrackStatus


@dataclass(frozen=True, eq=False)
class Track:
    id: int
    state: np.ndarray
    covariance: np.ndarray
    status: TrackStatus = TrackStatus.TENTATIVE
    # most recent last, True = hit
    hits: Tuple[bool, ...] = ()
    consecutive_misses: int = 0
    age: int = 0
    innovation: Optional[np.ndarray] = None
    innovation_cov: Optional[np.ndarray] = None

    @property
    def position(self) -> np.ndarray:
        return self.state[:3]

    @property
    def velocity(self) -> np.ndarray:
        return self.state[3:6]

    @property
    def position_cov(self) -> np.ndarray:
        return self.covariance[:3, :3]
