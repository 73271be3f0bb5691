from dataclasses import dataclass

import numpy as np

from src.domain.models.coverage.grid_spec import GridSpec


@dataclass(frozen=True, eq=False)
class CoverageGrid:
    spec: GridSpec
    # shape (nz, ny, nx)
    snr_db: np.ndarray
    threshold_db: float

    @property
    def covered(self) -> np.ndarray:
        return self.snr_db >= self.threshold_db
