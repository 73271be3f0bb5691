from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.domain.enums.gdop_preset import GdopPreset
from src.domain.enums.meas_kind import MeasKind


@dataclass(frozen=True)
class MeasModel:
    kind: MeasKind = MeasKind.BISTATIC
    sigma_range_sum: float = 1.0
    sigma_angle: float = np.deg2rad(1.0)
    sigma_range_difference: Optional[float] = None

    def __post_init__(self):
        sigmas = [self.sigma_range_sum, self.sigma_angle]
        if self.sigma_range_difference is not None:
            sigmas.append(self.sigma_range_difference)
        if any(s <= 0 for s in sigmas):
            raise ValueError("measurement sigmas must be > 0")

    @classmethod
    def for_tdoa(cls, sigma_range_difference: float) -> "MeasModel":
        return cls(kind=MeasKind.TDOA, sigma_range_difference=sigma_range_difference)

    @classmethod
    def from_preset(cls, preset: GdopPreset) -> "MeasModel":
        return cls(
            kind=MeasKind.BISTATIC,
            sigma_range_sum=preset.sigma_range_sum_m,
            sigma_angle=float(np.deg2rad(preset.sigma_angle_deg)),
        )

    def covariance(self) -> np.ndarray:
        """Diagonal covariance of (range_sum m, azimuth rad, elevation rad)."""
        return np.diag([self.sigma_range_sum ** 2, self.sigma_angle ** 2, self.sigma_angle ** 2])
