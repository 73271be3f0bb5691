from pydantic import Field
from scipy.constants import c as SPEED_OF_LIGHT

from src.domain.models.scenario.config_model import ConfigModel


class WaveformConfig(ConfigModel):
    carrier_freq: float = Field(default=3.5e9, gt=0)
    scs: float = Field(default=30e3, gt=0)
    n_subcarriers: int = Field(default=3334, ge=2)
    n_symbols_per_cpi: int = Field(default=256, ge=2)
    tx_power: float = Field(default=1.0, gt=0)
    noise_figure: float = 10.0
    noise_temp: float = Field(default=290.0, gt=0)

    @property
    def bandwidth(self) -> float:
        return self.n_subcarriers * self.scs

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def symbol_duration(self) -> float:
        # cyclic prefix ignored
        return 1.0 / self.scs
