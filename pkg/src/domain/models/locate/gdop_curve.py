from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class GdopCurve:
    azimuth_deg: np.ndarray
    gdop_m: np.ndarray
    preset: str
    target_range_m: float
