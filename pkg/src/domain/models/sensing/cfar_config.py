from pydantic import Field, model_validator

from src.domain.models.scenario.config_model import ConfigModel


class CfarConfig(ConfigModel):
    guard_range: int = Field(default=2, ge=0)
    guard_doppler: int = Field(default=2, ge=0)
    train_range: int = Field(default=8, ge=0)
    train_doppler: int = Field(default=8, ge=0)
    pfa: float = Field(default=1e-4, gt=0, lt=1)

    @model_validator(mode="after")
    def training_not_empty(self) -> "CfarConfig":
        if self.n_training == 0:
            raise ValueError("training window is empty")
        return self

    @property
    def window_shape(self) -> tuple:
        return (2 * (self.guard_range + self.train_range) + 1,
                2 * (self.guard_doppler + self.train_doppler) + 1)

    @property
    def guard_shape(self) -> tuple:
        return (2 * self.guard_range + 1, 2 * self.guard_doppler + 1)

    @property
    def n_training(self) -> int:
        outer = self.window_shape
        inner = self.guard_shape
        return outer[0] * outer[1] - inner[0] * inner[1]
