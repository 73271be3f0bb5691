from pydantic import Field

from src.domain.enums.element_pattern import ElementPattern
from src.domain.models.scenario.config_model import ConfigModel


class UpaConfig(ConfigModel):
    """
    Uniform planar array. nx elements run along the horizontal axis of the
    array face, ny along its vertical axis; spacing is in carrier wavelengths.
    """

    nx: int = Field(default=8, ge=1)
    ny: int = Field(default=8, ge=1)
    spacing: float = Field(default=0.5, gt=0)
    boresight_azimuth: float = 0.0
    boresight_elevation: float = Field(default=0.0, ge=-90, le=90)
    element_pattern: ElementPattern = ElementPattern.ISOTROPIC
    element_exponent: float = Field(default=1.0, gt=0)

    @property
    def n_elements(self) -> int:
        return self.nx * self.ny
