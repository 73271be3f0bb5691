from typing import List, Optional

import numpy as np
from pydantic import Field, model_validator

from src.domain.enums.fleet_formation import FleetFormation
from src.domain.enums.rcs_fluctuation import RcsFluctuation
from src.domain.models.scenario.box_region import BoxRegion
from src.domain.models.scenario.config_model import ConfigModel
from src.domain.models.scenario.uav_config import UavConfig


class FleetBounds(ConfigModel):
    altitude_min: float = Field(default=50.0, ge=0)
    altitude_max: float = 300.0
    speed_max: float = Field(default=44.4, gt=0)
    accel_max: float = Field(default=3.0, ge=0)
    # None: 2 km x 2 km around the Tx-Rx baseline midpoint, filled in at load time
    region: Optional[BoxRegion] = None

    @model_validator(mode="after")
    def altitude_order(self) -> "FleetBounds":
        if not self.altitude_min < self.altitude_max:
            raise ValueError("altitude_min must be < altitude_max")
        return self


class FleetConfig(ConfigModel):
    bounds: FleetBounds = Field(default_factory=FleetBounds)
    size: Optional[int] = Field(default=None, ge=0)
    formation: FleetFormation = FleetFormation.RANDOM
    ca_fraction: float = Field(default=0.5, ge=0, le=1)
    rcs_mean: float = Field(default=0.01, gt=0)
    rcs_fluctuation: RcsFluctuation = RcsFluctuation.NONE
    swarm_spacing: float = Field(default=30.0, gt=0)
    uavs: List[UavConfig] = Field(default_factory=list)

    @model_validator(mode="after")
    def consistent(self) -> "FleetConfig":
        if self.uavs and self.size is not None and self.size != len(self.uavs):
            raise ValueError(f"size={self.size} disagrees with {len(self.uavs)} listed uavs")
        ids = [u.id for u in self.uavs]
        if len(set(ids)) != len(ids):
            raise ValueError("uav ids must be unique")
        for u in self.uavs:
            if np.linalg.norm(u.initial_velocity.as_array()) > self.bounds.speed_max + 1e-9:
                raise ValueError(f"uav '{u.id}' speed exceeds speed_max")
        return self

    @property
    def fleet_size(self) -> int:
        return len(self.uavs) if self.uavs else (self.size or 0)
