from pydantic import Field

from src.domain.enums.window_type import WindowType
from src.domain.models.scenario.config_model import ConfigModel
from src.domain.models.scenario.processing_settings import AoaSettings, CoverageSettings, LocateSettings
from src.domain.models.sensing.cfar_config import CfarConfig
from src.domain.models.tracking.tracker_config import TrackerConfig


class RunConfig(ConfigModel):
    n_cpis: int = Field(default=20, ge=1)
    cpi_interval: float = Field(default=0.1, gt=0)
    seed: int = Field(default=42, ge=0, lt=2**64)
    window: WindowType = WindowType.RECT
    mti: bool = True
    cfar: CfarConfig = Field(default_factory=CfarConfig)
    aoa: AoaSettings = Field(default_factory=AoaSettings)
    locate: LocateSettings = Field(default_factory=LocateSettings)
    tracker: TrackerConfig = Field(default_factory=TrackerConfig)
    coverage: CoverageSettings = Field(default_factory=CoverageSettings)
