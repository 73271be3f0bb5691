from dataclasses import replace
from typing import List, Optional, Sequence

from src.application.services.tracking.kalman_service import KalmanService
from src.core.logger import logger
from src.domain.enums.track_status import TrackStatus
from src.domain.models.locate.measurement_fix import MeasurementFix
from src.domain.models.tracking.assignment import Assignment
from src.domain.models.tracking.track import Track
from src.domain.models.tracking.tracker_config import TrackerConfig


class LifecycleService:
    """
    Track lifecycle automaton:

        tentative --M-of-N hits--> confirmed --miss--> coasting --hit--> confirmed
        any --delete_after_misses consecutive misses--> deleted
        tentative still short of M hits after N scans --> deleted

    Ids are handed out monotonically and never reused.
    """

    def __init__(self, cfg: Optional[TrackerConfig] = None, kalman: Optional[KalmanService] = None):
        self.cfg = cfg or TrackerConfig()
        self.kalman = kalman or KalmanService(self.cfg)
        self.next_id = 1

    def lifecycle_step(
        self,
        tracks: Sequence[Track],
        assignment: Assignment,
        fixes: Sequence[MeasurementFix],
    ) -> List[Track]:
        """
        Advances every track by one scan and spawns tentative tracks from unassigned fixes.
        Tracks deleted in this scan are returned with DELETED status so callers can
        record them once; they are never advanced again.
        """
        hit_tracks = {t for t, _ in assignment.pairs}
        result = []
        for idx, t in enumerate(tracks):
            if t.status == TrackStatus.DELETED:
                continue
            result.append(self._advance(t, idx in hit_tracks))

        for fi in assignment.unassigned_fixes:
            spawned = self.kalman.initiate(self.next_id, fixes[fi])
            self.next_id += 1
            if self._confirmable(spawned.hits):
                spawned = replace(spawned, status=TrackStatus.CONFIRMED)
            logger.debug(f"[{self.__class__.__name__}] Track {spawned.id} spawned at {spawned.position.round(1).tolist()}")
            result.append(spawned)
        return result

    # --- HELPERS ---

    def _confirmable(self, hits) -> bool:
        return sum(hits[-self.cfg.confirm_n:]) >= self.cfg.confirm_m

    def _advance(self, t: Track, hit: bool) -> Track:
        hits = t.hits + (hit,)
        misses = 0 if hit else t.consecutive_misses + 1
        age = t.age + 1
        status = t.status

        if misses >= self.cfg.delete_after_misses:
            status = TrackStatus.DELETED
        elif status == TrackStatus.TENTATIVE:
            if self._confirmable(hits[:self.cfg.confirm_n]):
                status = TrackStatus.CONFIRMED
            elif age >= self.cfg.confirm_n:
                status = TrackStatus.DELETED
        elif status == TrackStatus.CONFIRMED and not hit:
            status = TrackStatus.COASTING
        elif status == TrackStatus.COASTING and hit:
            status = TrackStatus.CONFIRMED

        if status != t.status:
            logger.debug(f"[{self.__class__.__name__}] {status.emoji} Track {t.id}: {t.status.value} -> {status.value}")
        return replace(t, hits=hits, consecutive_misses=misses, age=age, status=status)
