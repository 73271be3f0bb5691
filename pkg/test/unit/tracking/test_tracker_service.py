import numpy as np
import pytest

from src.application.services.tracking.tracker_service import TrackerService
from src.domain.enums.association_mode import AssociationMode
from src.domain.enums.track_status import TrackStatus
from src.domain.models.locate.measurement_fix import MeasurementFix
from src.domain.models.tracking.tracker_config import TrackerConfig

DT = 0.1
STARTS = [np.array([0.0, 0.0, 100.0]), np.array([400.0, 0.0, 150.0])]
VELOCITIES = [np.array([10.0, 0.0, 0.0]), np.array([0.0, -15.0, 0.0])]


def _fixes(k, rng):
    return [
        MeasurementFix(position=p + k * DT * v + rng.normal(scale=1.0, size=3), covariance=np.eye(3))
        for p, v in zip(STARTS, VELOCITIES)
    ]


def _run(mode, n_cpis=6):
    tracker = TrackerService(TrackerConfig(association=mode))
    rng = np.random.default_rng(10)
    history = [tracker.step(_fixes(k, rng), k, DT) for k in range(n_cpis)]
    return tracker, history


@pytest.mark.parametrize("mode", list(AssociationMode))
def test_two_separated_targets_are_confirmed(mode):
    tracker, history = _run(mode)

    assert len(tracker.tracks) == 2
    assert all(t.status == TrackStatus.CONFIRMED for t in tracker.tracks)
    assert len(history) == 6
    assert [s.status for s in history[0]] == [TrackStatus.TENTATIVE] * 2


def test_gnn_and_jpda_agree_on_disjoint_gates():
    gnn, _ = _run(AssociationMode.GNN)
    jpda, _ = _run(AssociationMode.JPDA)

    assert sum(t.status.is_confirmed for t in gnn.tracks) == sum(t.status.is_confirmed for t in jpda.tracks)
    for a, b in zip(sorted(gnn.tracks, key=lambda t: t.id), sorted(jpda.tracks, key=lambda t: t.id)):
        np.testing.assert_allclose(a.position, b.position, atol=1.0)


def test_tracks_follow_their_targets():
    tracker, _ = _run(AssociationMode.GNN, n_cpis=10)

    final = sorted(tracker.tracks, key=lambda t: t.id)
    for track, p, v in zip(final, STARTS, VELOCITIES):
        assert np.linalg.norm(track.position - (p + 9 * DT * v)) < 5.0


def test_lost_target_is_reported_deleted_once():
    tracker = TrackerService(TrackerConfig(delete_after_misses=2))
    fix = MeasurementFix(position=np.array([0.0, 0.0, 100.0]), covariance=np.eye(3))
    tracker.step([fix], 0, DT)
    tracker.step([fix], 1, DT)

    tracker.step([], 2, DT)
    deleted = tracker.step([], 3, DT)

    assert [s.status for s in deleted] == [TrackStatus.DELETED]
    assert tracker.tracks == []
    assert tracker.step([], 4, DT) == []


def test_spawned_ids_increase():
    tracker = TrackerService()
    ids = []
    for k in range(3):
        snaps = tracker.step([MeasurementFix(position=np.array([1000.0 * k, 0.0, 100.0]), covariance=np.eye(3))], k, DT)
        ids.extend(s.track_id for s in snaps)

    assert sorted(set(ids)) == [1, 2, 3]
