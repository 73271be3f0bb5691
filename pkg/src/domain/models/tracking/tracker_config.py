from pydantic import Field, model_validator

from src.domain.enums.association_mode import AssociationMode
from src.domain.enums.motion_model import MotionModel
from src.domain.models.scenario.config_model import ConfigModel


class TrackerConfig(ConfigModel):
    model: MotionModel = MotionModel.CV
    sigma_a: float = Field(default=2.0, ge=0)
    gate_probability: float = Field(default=0.99, gt=0, lt=1)
    confirm_m: int = Field(default=2, ge=1)
    confirm_n: int = Field(default=3, ge=1)
    delete_after_misses: int = Field(default=5, ge=1)
    association: AssociationMode = AssociationMode.GNN
    p_detection: float = Field(default=0.9, gt=0, le=1)
    clutter_density: float = Field(default=1e-9, gt=0)
    initial_velocity_sigma: float = Field(default=25.0, gt=0)
    initial_accel_sigma: float = Field(default=3.0, gt=0)
    jpda_event_cap: int = Field(default=100000, ge=1)
    jpda_max_fixes_per_track: int = Field(default=10, ge=1)
    match_radius: float = Field(default=50.0, gt=0)

    @model_validator(mode="after")
    def m_of_n(self) -> "TrackerConfig":
        if self.confirm_m > self.confirm_n:
            raise ValueError("confirm_m must be <= confirm_n")
        return self

    @property
    def state_dim(self) -> int:
        return 6 if self.model == MotionModel.CV else 9
