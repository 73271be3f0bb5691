from dataclasses import dataclass

import numpy as np

from src.domain.models.scenario.waveform_config import WaveformConfig


@dataclass(frozen=True, eq=False)
class EchoTensor:
    """
    Data-removed channel observations of one CPI, shape (Q, N, M):
    receive elements x subcarriers x symbols, complex64.

    Amplitudes are in units of the per-sample noise standard deviation: a
    target contributes |a|^2 = rx_echo_power / noise_power_per_sample per
    entry and the noise is CN(0, 1).
    """

    data: np.ndarray
    cpi_index: int
    waveform: WaveformConfig
    target_power: float = 0.0
    clutter_power: float = 0.0

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def scr_db(self) -> float:
        if self.clutter_power <= 0:
            return float("inf")
        if self.target_power <= 0:
            return float("-inf")
        return float(10 * np.log10(self.target_power / self.clutter_power))
