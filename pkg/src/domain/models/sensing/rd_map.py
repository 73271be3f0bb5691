from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class RdMap:
    """Range-Doppler power, shape (N, M), native (unshifted) bin order."""

    power: np.ndarray
    range_axis: np.ndarray
    doppler_axis: np.ndarray

    @property
    def shape(self) -> tuple:
        return self.power.shape
