from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.domain.models.sensing.detection import Detection


@dataclass(frozen=True, eq=False)
class MeasurementFix:
    position: np.ndarray
    covariance: np.ndarray
    detection: Optional[Detection] = None
    condition_number: float = 1.0
    residual: float = 0.0
    ghost: bool = False
    iterations: int = 0
