from dataclasses import dataclass
from typing import Optional

from src.domain.models.locate.measurement_fix import MeasurementFix
from src.domain.models.sensing.detection import Detection


@dataclass(frozen=True, eq=False)
class LocatedDetection:
    """A clustered detection with its AoA estimate and fix; both None when localisation failed."""

    detection: Detection
    azimuth: Optional[float] = None
    elevation: Optional[float] = None
    fix: Optional[MeasurementFix] = None
