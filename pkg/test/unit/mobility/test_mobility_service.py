import numpy as np
import pytest

from src.application.services.mobility_service import MobilityService
from src.domain.enums.motion_model import MotionModel
from src.domain.models.scenario.box_region import BoxRegion
from src.domain.models.scenario.fleet_config import FleetBounds
from src.domain.models.scenario.uav_config import UavConfig
from src.domain.models.scenario.vec3 import Vec3
from src.domain.models.sensing.trajectory_state import TrajectoryState


def _state(p, v, a=(0.0, 0.0, 0.0)):
    return TrajectoryState(time=0.0, position=np.array(p, dtype=float), velocity=np.array(v, dtype=float),
                           acceleration=np.array(a, dtype=float))


@pytest.fixture
def bounds():
    return FleetBounds(region=BoxRegion.centered(250.0, 0.0, 2000.0, 2000.0))


def test_cv_propagation():
    s = MobilityService.propagate(_state((0, 0, 100), (10, 0, 0)), 1.0, MotionModel.CV)

    np.testing.assert_allclose(s.position, [10, 0, 100])


def test_ca_propagation():
    s = MobilityService.propagate(_state((0, 0, 100), (0, 0, 0), (2, 0, 0)), 1.0, MotionModel.CA)

    np.testing.assert_allclose(s.position, [1, 0, 100])
    np.testing.assert_allclose(s.velocity, [2, 0, 0])


def test_two_half_steps_equal_one_step():
    s0 = _state((3, -4, 120), (10, 5, 0), (1, -2, 0))
    for model in MotionModel:
        half = MobilityService.propagate(MobilityService.propagate(s0, 0.5, model), 0.5, model)
        full = MobilityService.propagate(s0, 1.0, model)
        np.testing.assert_allclose(half.position, full.position, atol=1e-12)
        np.testing.assert_allclose(half.velocity, full.velocity, atol=1e-12)


def test_non_positive_dt_is_rejected():
    with pytest.raises(ValueError):
        MobilityService.propagate(_state((0, 0, 100), (1, 0, 0)), 0.0, MotionModel.CV)


def test_sample_trajectory_single_sample_is_initial_state():
    u = UavConfig(id="a", initial_position=Vec3(x=1, y=2, z=100), initial_velocity=Vec3(x=3, y=0, z=0))

    states = MobilityService.sample_trajectory(u, 0.0, 1.0, 1)

    assert len(states) == 1
    np.testing.assert_allclose(states[0].position, [1, 2, 100])


def test_cv_samples_form_arithmetic_progression():
    u = UavConfig(id="a", initial_position=Vec3(x=0, y=0, z=100), initial_velocity=Vec3(x=10, y=0, z=0))

    states = MobilityService.sample_trajectory(u, 0.0, 1.0, 3)

    assert [s.position[0] for s in states] == pytest.approx([0, 10, 20])
    assert len({round(s.speed, 12) for s in states}) == 1, "CV speed must be constant"


def test_ca_samples_match_closed_form():
    p0, v0, a = np.array([5.0, 6.0, 150.0]), np.array([3.0, -1.0, 0.0]), np.array([0.5, 0.25, 0.0])
    u = UavConfig(id="a", initial_position=Vec3.from_array(p0), initial_velocity=Vec3.from_array(v0),
                  acceleration=Vec3.from_array(a), motion_model=MotionModel.CA)

    states = MobilityService.sample_trajectory(u, 0.0, 0.1, 50)

    for s in states:
        np.testing.assert_allclose(s.position, p0 + v0 * s.time + 0.5 * a * s.time ** 2, atol=1e-9)


def test_cv_ignores_configured_acceleration():
    u = UavConfig(id="a", initial_position=Vec3(x=0, y=0, z=100), acceleration=Vec3(x=2, y=0, z=0))

    states = MobilityService.sample_trajectory(u, 0.0, 1.0, 3)

    np.testing.assert_allclose(states[-1].position, [0, 0, 100])


def test_random_fleet_size_and_bounds(bounds):
    service = MobilityService()
    for seed in range(20):
        uavs = service.random_fleet(np.random.default_rng(seed), bounds, 10, horizon=2.0)

        assert len(uavs) == 10
        for u in uavs:
            assert bounds.altitude_min <= u.initial_position.z <= bounds.altitude_max
            assert bounds.region.x_min <= u.initial_position.x <= bounds.region.x_max
            assert 0 < np.linalg.norm(u.initial_velocity.as_array()) <= bounds.speed_max
            assert np.linalg.norm(u.acceleration.as_array()) <= bounds.accel_max + 1e-12


def test_random_fleet_speed_stays_bounded_over_horizon(bounds):
    horizon = 2.0
    uavs = MobilityService().random_fleet(np.random.default_rng(3), bounds, 30, horizon=horizon, ca_fraction=1.0)

    for u in uavs:
        final = MobilityService.sample_trajectory(u, 0.0, horizon, 2)[-1]
        assert final.speed <= bounds.speed_max + 1e-9, f"{u.id} exceeds speed_max at the horizon"


def test_random_fleet_is_deterministic(bounds):
    first = MobilityService().random_fleet(np.random.default_rng(11), bounds, 10)
    second = MobilityService().random_fleet(np.random.default_rng(11), bounds, 10)

    assert first == second


def test_swarm_members_share_heading(bounds):
    uavs = MobilityService().swarm_fleet(np.random.default_rng(5), bounds, 6, spacing=30.0)

    velocities = np.array([u.initial_velocity.as_array() for u in uavs])
    headings = np.arctan2(velocities[:, 1], velocities[:, 0])
    spread = np.angle(np.exp(1j * (headings - headings[0])))
    assert np.max(np.abs(spread)) < np.radians(30), "swarm should fly a common heading"
    assert all(u.motion_model == MotionModel.CV for u in uavs)


def test_fleet_truth_is_keyed_per_cpi():
    uavs = [UavConfig(id=f"u{k}", initial_position=Vec3(x=k, y=0, z=100)) for k in range(3)]

    truth = MobilityService.fleet_truth(uavs, 0.0, 0.1, 4)

    assert len(truth) == 4
    assert set(truth[2]) == {"u0", "u1", "u2"}
    assert truth[3]["u1"].time == pytest.approx(0.3)
