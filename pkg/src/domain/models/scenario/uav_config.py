from pydantic import Field, field_validator

from src.domain.enums.motion_model import MotionModel
from src.domain.enums.rcs_fluctuation import RcsFluctuation
from src.domain.models.scenario.config_model import ConfigModel
from src.domain.models.scenario.vec3 import Vec3


class UavConfig(ConfigModel):
    id: str
    initial_position: Vec3
    initial_velocity: Vec3 = Field(default_factory=lambda: Vec3(x=0.0, y=0.0, z=0.0))
    acceleration: Vec3 = Field(default_factory=lambda: Vec3(x=0.0, y=0.0, z=0.0))
    rcs_mean: float = Field(default=0.01, gt=0)
    motion_model: MotionModel = MotionModel.CV
    rcs_fluctuation: RcsFluctuation = RcsFluctuation.NONE

    @field_validator("initial_position")
    @classmethod
    def above_ground(cls, v: Vec3) -> Vec3:
        if v.z < 0:
            raise ValueError("UAV altitude must be >= 0")
        return v
