from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Detection:
    i: int
    j: int
    power: float
    range_sum: float
    doppler: float
    snr_est: float
    range_sum_refined: Optional[float] = None
    doppler_refined: Optional[float] = None
    cpi: int = 0
    beam: int = -1

    @property
    def bin(self) -> tuple:
        return (self.i, self.j)
