from typing import Dict, List, Optional

import numpy as np

from src.core.logger import logger
from src.domain.enums.motion_model import MotionModel
from src.domain.enums.rcs_fluctuation import RcsFluctuation
from src.domain.models.scenario.fleet_config import FleetBounds
from src.domain.models.scenario.uav_config import UavConfig
from src.domain.models.scenario.vec3 import Vec3
from src.domain.models.sensing.trajectory_state import TrajectoryState


class MobilityService:
    """Ground-truth UAV kinematics: constant velocity or constant acceleration, sampled per CPI."""

    @staticmethod
    def propagate(s: TrajectoryState, dt: float, model: MotionModel) -> TrajectoryState:
        if dt <= 0:
            raise ValueError("dt must be > 0")
        if model == MotionModel.CA:
            position = s.position + s.velocity * dt + 0.5 * s.acceleration * dt ** 2
            velocity = s.velocity + s.acceleration * dt
        else:
            position = s.position + s.velocity * dt
            velocity = s.velocity.copy()
        return TrajectoryState(time=s.time + dt, position=position, velocity=velocity,
                               acceleration=s.acceleration.copy(), uav_id=s.uav_id)

    @staticmethod
    def initial_state(u: UavConfig, t0: float = 0.0) -> TrajectoryState:
        acceleration = u.acceleration.as_array() if u.motion_model == MotionModel.CA else np.zeros(3)
        return TrajectoryState(time=t0, position=u.initial_position.as_array(),
                               velocity=u.initial_velocity.as_array(), acceleration=acceleration, uav_id=u.id)

    @staticmethod
    def sample_trajectory(u: UavConfig, t0: float, dt: float, n: int) -> List[TrajectoryState]:
        """States at t0, t0+dt, ... evaluated in closed form from the initial condition."""
        if n < 1:
            raise ValueError("n must be >= 1")
        s0 = MobilityService.initial_state(u, t0)
        states = []
        for k in range(n):
            t = k * dt
            position = s0.position + s0.velocity * t + 0.5 * s0.acceleration * t ** 2
            velocity = s0.velocity + s0.acceleration * t
            states.append(TrajectoryState(time=t0 + t, position=position, velocity=velocity,
                                          acceleration=s0.acceleration.copy(), uav_id=u.id))
        return states

    @staticmethod
    def fleet_truth(uavs: List[UavConfig], t0: float, dt: float, n: int) -> List[Dict[str, TrajectoryState]]:
        """Per-CPI mapping uav id -> state, for n CPIs."""
        tracks = {u.id: MobilityService.sample_trajectory(u, t0, dt, n) for u in uavs}
        return [{uid: states[k] for uid, states in tracks.items()} for k in range(n)]

    def random_fleet(
        self,
        rng: np.random.Generator,
        bounds: FleetBounds,
        n: int,
        horizon: Optional[float] = None,
        ca_fraction: float = 0.5,
        rcs_mean: float = 0.01,
        rcs_fluctuation: RcsFluctuation = RcsFluctuation.NONE,
    ) -> List[UavConfig]:
        """
        Draws n UAVs in level flight inside the bounds.

        Args:
            horizon (float, optional): simulated duration; CA accelerations are capped
                so the speed never leaves (0, speed_max] over it.

        Returns:
            list[UavConfig]: ids uav-00, uav-01, ...
        """
        if bounds.region is None:
            raise ValueError("fleet bounds need a region")
        region = bounds.region

        xs = rng.uniform(region.x_min, region.x_max, n)
        ys = rng.uniform(region.y_min, region.y_max, n)
        zs = rng.uniform(bounds.altitude_min, bounds.altitude_max, n)
        # (0, speed_max]
        speeds = bounds.speed_max * (1.0 - rng.random(n))
        headings = rng.uniform(0.0, 2 * np.pi, n)
        is_ca = rng.random(n) < ca_fraction
        accel_fraction = rng.random(n)
        accel_headings = rng.uniform(0.0, 2 * np.pi, n)

        uavs = []
        for k in range(n):
            velocity = speeds[k] * np.array([np.cos(headings[k]), np.sin(headings[k]), 0.0])
            acceleration = np.zeros(3)
            if is_ca[k]:
                cap = bounds.accel_max
                if horizon:
                    cap = min(cap, (bounds.speed_max - speeds[k]) / horizon)
                acceleration = accel_fraction[k] * cap * np.array([np.cos(accel_headings[k]), np.sin(accel_headings[k]), 0.0])
            uavs.append(UavConfig(
                id=f"uav-{k:02d}",
                initial_position=Vec3(x=float(xs[k]), y=float(ys[k]), z=float(zs[k])),
                initial_velocity=Vec3.from_array(velocity),
                acceleration=Vec3.from_array(acceleration),
                rcs_mean=rcs_mean,
                motion_model=MotionModel.CA if is_ca[k] else MotionModel.CV,
                rcs_fluctuation=rcs_fluctuation,
            ))

        logger.info(f"[{self.__class__.__name__}] 🚀 Random fleet drawn: {n} UAVs ({int(is_ca.sum())} CA)")
        return uavs

    def swarm_fleet(
        self,
        rng: np.random.Generator,
        bounds: FleetBounds,
        n: int,
        spacing: float,
        rcs_mean: float = 0.01,
        rcs_fluctuation: RcsFluctuation = RcsFluctuation.NONE,
    ) -> List[UavConfig]:
        """A tight CV formation: shared heading and speed, members scattered around a common centre."""
        if bounds.region is None:
            raise ValueError("fleet bounds need a region")
        region = bounds.region

        centre = np.array([
            rng.uniform(region.x_min, region.x_max),
            rng.uniform(region.y_min, region.y_max),
            rng.uniform(bounds.altitude_min, bounds.altitude_max),
        ])
        speed = bounds.speed_max * rng.uniform(0.3, 0.9)
        heading = rng.uniform(0.0, 2 * np.pi)
        common = speed * np.array([np.cos(heading), np.sin(heading), 0.0])

        offsets = rng.normal(scale=spacing, size=(n, 3))
        spread = rng.normal(scale=0.05 * speed, size=(n, 2))

        uavs = []
        for k in range(n):
            position = centre + offsets[k]
            position[2] = np.clip(position[2], bounds.altitude_min, bounds.altitude_max)
            velocity = common + np.array([spread[k, 0], spread[k, 1], 0.0])
            norm = np.linalg.norm(velocity)
            if norm > bounds.speed_max:
                velocity *= bounds.speed_max / norm
            uavs.append(UavConfig(
                id=f"uav-{k:02d}",
                initial_position=Vec3.from_array(position),
                initial_velocity=Vec3.from_array(velocity),
                rcs_mean=rcs_mean,
                motion_model=MotionModel.CV,
                rcs_fluctuation=rcs_fluctuation,
            ))

        logger.info(f"[{self.__class__.__name__}] 🚀 Swarm drawn: {n} UAVs around {np.round(centre, 1).tolist()}")
        return uavs
