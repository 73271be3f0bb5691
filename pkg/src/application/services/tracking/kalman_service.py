from dataclasses import replace
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import block_diag, cho_factor, cho_solve

from src.core.exceptions import TrackingError
from src.domain.enums.motion_model import MotionModel
from src.domain.models.locate.measurement_fix import MeasurementFix
from src.domain.models.tracking.track import Track
from src.domain.models.tracking.tracker_config import TrackerConfig


class KalmanService:
    """
    Linear Kalman filter on Cartesian position fixes.
    State layout is [p(3), v(3)] for CV and [p(3), v(3), a(3)] for CA.
    """

    def __init__(self, cfg: Optional[TrackerConfig] = None):
        self.cfg = cfg or TrackerConfig()

    @staticmethod
    def transition(model: MotionModel, dt: float, sigma_a: float) -> Tuple[np.ndarray, np.ndarray]:
        """F and the discrete white-noise acceleration Q = sigma_a^2 G G^T."""
        if dt <= 0:
            raise ValueError("dt must be > 0")
        if model == MotionModel.CV:
            f1 = np.array([[1.0, dt], [0.0, 1.0]])
            g1 = np.array([[dt ** 2 / 2], [dt]])
        else:
            f1 = np.array([[1.0, dt, dt ** 2 / 2], [0.0, 1.0, dt], [0.0, 0.0, 1.0]])
            g1 = np.array([[dt ** 2 / 2], [dt], [1.0]])
        eye = np.eye(3)
        f = np.kron(f1, eye)
        g = np.kron(g1, eye)
        return f, sigma_a ** 2 * g @ g.T

    @staticmethod
    def observation(state_dim: int) -> np.ndarray:
        h = np.zeros((3, state_dim))
        h[:, :3] = np.eye(3)
        return h

    def initiate(self, track_id: int, fix: MeasurementFix) -> Track:
        """New tentative track at the fix position, zero velocity, wide velocity prior."""
        n = self.cfg.state_dim
        state = np.zeros(n)
        state[:3] = fix.position
        blocks = [np.asarray(fix.covariance, dtype=float), self.cfg.initial_velocity_sigma ** 2 * np.eye(3)]
        if n == 9:
            blocks.append(self.cfg.initial_accel_sigma ** 2 * np.eye(3))
        return Track(id=track_id, state=state, covariance=block_diag(*blocks), hits=(True,), age=1)

    def kf_predict(self, t: Track, dt: float) -> Track:
        f, q = self.transition(self.cfg.model, dt, self.cfg.sigma_a)
        p = f @ t.covariance @ f.T + q
        return replace(t, state=f @ t.state, covariance=0.5 * (p + p.T), innovation=None, innovation_cov=None)

    def innovation(self, t: Track, fix: MeasurementFix) -> Tuple[np.ndarray, np.ndarray]:
        h = self.observation(t.state.size)
        s = h @ t.covariance @ h.T + np.asarray(fix.covariance, dtype=float)
        return np.asarray(fix.position, dtype=float) - h @ t.state, 0.5 * (s + s.T)

    def kf_update(self, t: Track, fix: MeasurementFix) -> Track:
        nu, s = self.innovation(t, fix)
        gain, posterior = self.gain_and_posterior(t, np.asarray(fix.covariance, dtype=float))
        return replace(t, state=t.state + gain @ nu, covariance=posterior, innovation=nu, innovation_cov=s)

    def gain_and_posterior(self, t: Track, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Kalman gain and Joseph-form posterior covariance for measurement noise r."""
        h = self.observation(t.state.size)
        p = t.covariance
        s = h @ p @ h.T + r
        s = 0.5 * (s + s.T)
        try:
            factor = cho_factor(s)
        except np.linalg.LinAlgError as e:
            raise TrackingError(f"innovation covariance of track {t.id} is not positive definite") from e
        gain = cho_solve(factor, h @ p).T
        i_kh = np.eye(p.shape[0]) - gain @ h
        posterior = i_kh @ p @ i_kh.T + gain @ r @ gain.T
        return gain, 0.5 * (posterior + posterior.T)

    @staticmethod
    def nees(t: Track, truth_position: np.ndarray) -> float:
        """Position-block normalised estimation error squared (3 dof)."""
        e = t.position - np.asarray(truth_position, dtype=float)
        return float(e @ np.linalg.solve(t.position_cov, e))
