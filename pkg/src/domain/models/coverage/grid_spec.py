from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Cell-centred axis-aligned grid; shape is (nx, ny, nz), nz = 1 for a 2D slice."""

    origin: np.ndarray
    spacing: float
    shape: Tuple[int, int, int]

    def __post_init__(self):
        if self.spacing <= 0:
            raise ValueError("grid spacing must be > 0")
        if min(self.shape) < 1:
            raise ValueError("grid must be non-empty")

    @property
    def is_3d(self) -> bool:
        return self.shape[2] > 1

    @property
    def cell_measure(self) -> float:
        return self.spacing ** 3 if self.is_3d else self.spacing ** 2

    def axes(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(self.origin[k] + self.spacing * np.arange(self.shape[k]) for k in range(3))

    def points(self) -> np.ndarray:
        """Cell centres, shape (nz, ny, nx, 3) so that x runs fastest."""
        xs, ys, zs = self.axes()
        zz, yy, xx = np.meshgrid(zs, ys, xs, indexing="ij")
        return np.stack([xx, yy, zz], axis=-1)
