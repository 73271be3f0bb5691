from typing import Optional

from pydantic import Field, model_validator

from src.domain.models.scenario.config_model import ConfigModel


class AoaSettings(ConfigModel):
    n_snapshots: int = Field(default=16, ge=1)
    n_sources: int = Field(default=1, ge=1)
    # azimuth grid spans boresight_azimuth +/- az_half_span
    az_half_span: float = Field(default=90.0, gt=0, le=180)
    el_min: float = Field(default=-10.0, ge=-90)
    el_max: float = Field(default=90.0, le=90)
    step_deg: float = Field(default=1.0, gt=0)
    diagonal_loading: float = Field(default=1e-6, ge=0)

    @model_validator(mode="after")
    def elevation_order(self) -> "AoaSettings":
        if self.el_min > self.el_max:
            raise ValueError("el_min must be <= el_max")
        return self


class LocateSettings(ConfigModel):
    # None: range_sum_resolution / sqrt(12)
    sigma_range_sum: Optional[float] = Field(default=None, gt=0)
    sigma_angle_deg: float = Field(default=0.5, gt=0)


class CoverageSettings(ConfigModel):
    # None: isotropic SNR at reference_level
    threshold_db: Optional[float] = None
    reference_level: float = Field(default=250000.0, gt=0)
    extent_2d: float = Field(default=2000.0, gt=0)
    spacing_2d: float = Field(default=5.0, gt=0)
    extent_3d: float = Field(default=1000.0, gt=0)
    spacing_3d: float = Field(default=10.0, gt=0)
    # None: mean station altitude
    slice_altitude: Optional[float] = None
    rcs: float = Field(default=0.01, gt=0)
