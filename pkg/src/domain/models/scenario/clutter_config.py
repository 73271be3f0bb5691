from typing import Optional

from pydantic import Field

from src.domain.models.scenario.box_region import BoxRegion
from src.domain.models.scenario.config_model import ConfigModel


class ClutterConfig(ConfigModel):
    n_scatterers: int = Field(default=20, ge=0)
    region: Optional[BoxRegion] = None
    scr_target: float = 0.0
