from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class SpatialSpectrum:
    """MUSIC pseudo-spectrum on an (elevation, azimuth) grid, values shape (n_el, n_az)."""

    azimuths: np.ndarray
    elevations: np.ndarray
    values: np.ndarray

    @property
    def step(self) -> Tuple[float, float]:
        az_step = float(self.azimuths[1] - self.azimuths[0]) if self.azimuths.size > 1 else 0.0
        el_step = float(self.elevations[1] - self.elevations[0]) if self.elevations.size > 1 else 0.0
        return az_step, el_step


@dataclass(frozen=True)
class AoaEstimate:
    azimuth: float
    elevation: float
    value: float


@dataclass(frozen=True)
class AoaResult:
    estimates: List[AoaEstimate] = field(default_factory=list)
    # fewer local maxima than requested
    incomplete: bool = False
