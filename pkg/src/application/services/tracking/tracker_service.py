import time
from typing import List, Optional, Sequence

import numpy as np

from src.application.services.tracking.association_service import AssociationService
from src.application.services.tracking.kalman_service import KalmanService
from src.application.services.tracking.lifecycle_service import LifecycleService
from src.core.logger import logger
from src.domain.enums.association_mode import AssociationMode
from src.domain.enums.track_status import TrackStatus
from src.domain.models.locate.measurement_fix import MeasurementFix
from src.domain.models.tracking.track import Track
from src.domain.models.tracking.track_snapshot import TrackSnapshot
from src.domain.models.tracking.tracker_config import TrackerConfig


class TrackerService:
    """Multi-target tracker advanced strictly CPI by CPI: predict, associate, update, lifecycle."""

    def __init__(self, cfg: Optional[TrackerConfig] = None):
        self.cfg = cfg or TrackerConfig()
        self.kalman = KalmanService(self.cfg)
        self.association = AssociationService(self.cfg, self.kalman)
        self.lifecycle = LifecycleService(self.cfg, self.kalman)
        self.tracks: List[Track] = []

    def step(self, fixes: Sequence[MeasurementFix], cpi: int, dt: float) -> List[TrackSnapshot]:
        start = time.perf_counter()
        fixes = list(fixes)
        predicted = [self.kalman.kf_predict(t, dt) for t in self.tracks] if self.tracks else []

        if self.cfg.association == AssociationMode.JPDA:
            gated = np.isfinite(self.association.assign_costs(predicted, fixes))
            betas = self.association.jpda_betas(predicted, fixes)
            updated = self.association.jpda_update(predicted, fixes)
            assignment = self.association.jpda_assignment(betas, gated)
        else:
            assignment = self.association.gnn_associate(predicted, fixes)
            updated = list(predicted)
            for ti, fi in assignment.pairs:
                updated[ti] = self.kalman.kf_update(predicted[ti], fixes[fi])

        advanced = self.lifecycle.lifecycle_step(updated, assignment, fixes)
        snapshots = [
            TrackSnapshot(cpi=cpi, track_id=t.id, status=t.status, position=t.position.copy(),
                          velocity=t.velocity.copy(), position_cov=t.position_cov.copy())
            for t in advanced
        ]
        self.tracks = [t for t in advanced if t.status != TrackStatus.DELETED]

        elapsed = time.perf_counter() - start
        confirmed = sum(1 for t in self.tracks if t.status.is_confirmed)
        logger.debug(
            f"[{self.__class__.__name__}] CPI {cpi}: {len(fixes)} fixes, {len(self.tracks)} tracks "
            f"({confirmed} confirmed) ({elapsed:.4f}s)"
        )
        return snapshots
