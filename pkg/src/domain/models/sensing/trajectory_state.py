from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass(frozen=True, eq=False)
class TrajectoryState:
    time: float
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray = field(default_factory=lambda: np.zeros(3))
    uav_id: Optional[str] = None

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.velocity))
