from pydantic import Field, field_validator

from src.domain.enums.station_role import StationRole
from src.domain.models.scenario.config_model import ConfigModel
from src.domain.models.scenario.upa_config import UpaConfig
from src.domain.models.scenario.vec3 import Vec3


class StationConfig(ConfigModel):
    id: str
    position: Vec3
    role: StationRole
    array: UpaConfig = Field(default_factory=UpaConfig)

    @field_validator("position")
    @classmethod
    def above_ground(cls, v: Vec3) -> Vec3:
        if v.z < 0:
            raise ValueError("station altitude must be >= 0")
        return v
