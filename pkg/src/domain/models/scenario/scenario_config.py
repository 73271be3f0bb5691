from typing import List

import numpy as np
from pydantic import Field, model_validator

from src.domain.enums.station_role import StationRole
from src.domain.models.scenario.clutter_config import ClutterConfig
from src.domain.models.scenario.config_model import ConfigModel
from src.domain.models.scenario.fleet_config import FleetConfig
from src.domain.models.scenario.run_config import RunConfig
from src.domain.models.scenario.station_config import StationConfig
from src.domain.models.scenario.waveform_config import WaveformConfig


class ScenarioConfig(ConfigModel):
    waveform: WaveformConfig = Field(default_factory=WaveformConfig)
    stations: List[StationConfig]
    fleet: FleetConfig = Field(default_factory=FleetConfig)
    clutter: ClutterConfig = Field(default_factory=ClutterConfig)
    run: RunConfig = Field(default_factory=RunConfig)

    @model_validator(mode="after")
    def one_bistatic_pair(self) -> "ScenarioConfig":
        roles = [s.role for s in self.stations]
        if roles.count(StationRole.TRANSMITTER) != 1 or roles.count(StationRole.RECEIVER) != 1 or len(roles) != 2:
            raise ValueError("stations must hold exactly one transmitter and one receiver")
        if self.stations[0].position == self.stations[1].position:
            raise ValueError("station positions must be distinct")
        return self

    @property
    def transmitter(self) -> StationConfig:
        return next(s for s in self.stations if s.role == StationRole.TRANSMITTER)

    @property
    def receiver(self) -> StationConfig:
        return next(s for s in self.stations if s.role == StationRole.RECEIVER)

    @property
    def baseline(self) -> float:
        return float(np.linalg.norm(self.transmitter.position.as_array() - self.receiver.position.as_array()))

    @property
    def n_cpis(self) -> int:
        return self.run.n_cpis

    @property
    def cpi_interval(self) -> float:
        return self.run.cpi_interval

    @property
    def seed(self) -> int:
        return self.run.seed
