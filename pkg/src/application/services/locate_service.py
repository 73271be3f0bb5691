import time
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.application.utils.geometry_helper import GeometryHelper
from src.core.exceptions import GeometryError, InfeasibleGeometryError, RankDeficientError, TdoaDivergenceError
from src.core.logger import logger
from src.domain.enums.gdop_preset import GdopPreset
from src.domain.enums.meas_kind import MeasKind
from src.domain.models.locate.gdop_curve import GdopCurve
from src.domain.models.locate.meas_model import MeasModel
from src.domain.models.locate.measurement_fix import MeasurementFix
from src.domain.models.sensing.detection import Detection


class LocateService:
    """
    Position fixes from (range_sum, azimuth, elevation), passive TDOA multilateration,
    and the Jacobian/GDOP machinery used for geometry studies and fix covariances.
    """

    MAX_ITERATIONS = 50
    STEP_TOLERANCE = 1e-10
    GHOST_RESIDUAL_FACTOR = 10.0

    # --- BISTATIC ---

    @staticmethod
    def measure(tx: np.ndarray, rx: np.ndarray, p: np.ndarray) -> Tuple[float, np.ndarray]:
        """Forward model: range sum and unit direction from rx."""
        tx, rx, p = (np.asarray(v, dtype=float) for v in (tx, rx, p))
        return float(np.linalg.norm(p - tx) + np.linalg.norm(p - rx)), GeometryHelper.unit(p - rx)

    @staticmethod
    def bistatic_solve(tx: np.ndarray, rx: np.ndarray, range_sum: float, direction: np.ndarray) -> np.ndarray:
        """
        Closed-form intersection of the receive ray with the range-sum ellipsoid:
        r = (R^2 - L^2) / (2 (R - d.(tx - rx))), p = rx + r d.
        """
        tx = np.asarray(tx, dtype=float)
        rx = np.asarray(rx, dtype=float)
        direction = np.asarray(direction, dtype=float)
        if abs(np.linalg.norm(direction) - 1.0) > 1e-6:
            raise ValueError("direction must be unit-norm")

        baseline = float(np.linalg.norm(tx - rx))
        if range_sum <= baseline:
            raise InfeasibleGeometryError(f"range_sum {range_sum:.3f} m does not exceed baseline {baseline:.3f} m")
        denom = 2.0 * (range_sum - float(np.dot(direction, tx - rx)))
        if denom <= 0:
            raise InfeasibleGeometryError("receive ray has no forward intersection with the ellipsoid")

        r = (range_sum ** 2 - baseline ** 2) / denom
        return rx + r * direction

    @staticmethod
    def bistatic_jacobian(tx: np.ndarray, rx: np.ndarray, p: np.ndarray) -> np.ndarray:
        """
        Rows: d(range_sum)/dp, d(azimuth)/dp, d(elevation)/dp, angles in radians and
        measured in the receiver-centred ENU frame.
        """
        tx, rx, p = (np.asarray(v, dtype=float) for v in (tx, rx, p))
        to_tx, to_rx = p - tx, p - rx
        d_tx, d_rx = np.linalg.norm(to_tx), np.linalg.norm(to_rx)
        if d_tx < GeometryHelper.EPS or d_rx < GeometryHelper.EPS:
            raise GeometryError("target coincides with a station")
        dx, dy, dz = to_rx
        rho = np.hypot(dx, dy)
        if rho < GeometryHelper.EPS:
            raise GeometryError("azimuth undefined at the receiver zenith")

        range_row = to_tx / d_tx + to_rx / d_rx
        az_row = np.array([-dy, dx, 0.0]) / rho ** 2
        el_row = np.array([-dz * dx / rho, -dz * dy / rho, rho]) / d_rx ** 2
        return np.vstack([range_row, az_row, el_row])

    @staticmethod
    def gdop(j: np.ndarray, meas_cov: np.ndarray) -> float:
        """sqrt(trace((J^T R^-1 J)^-1)); inf when the information matrix is singular."""
        info = j.T @ np.linalg.inv(meas_cov) @ j
        if np.linalg.cond(info) > 1e15:
            return float("inf")
        try:
            cov = np.linalg.inv(info)
        except np.linalg.LinAlgError:
            return float("inf")
        return float(np.sqrt(np.trace(cov)))

    def gdop_scan(
        self,
        tx: np.ndarray,
        rx: np.ndarray,
        target_range_from_rx: float,
        error_mix: Union[GdopPreset, MeasModel],
        azimuths_deg: Optional[np.ndarray] = None,
        elevation_deg: float = 30.0,
    ) -> GdopCurve:
        """
        GDOP for targets at a fixed range and elevation from rx while the azimuth sweeps
        0-180 deg; 0 deg points from rx away from tx along the baseline, 180 deg towards tx.
        """
        start = time.perf_counter()
        tx = np.asarray(tx, dtype=float)
        rx = np.asarray(rx, dtype=float)
        model = MeasModel.from_preset(error_mix) if isinstance(error_mix, GdopPreset) else error_mix
        preset_name = error_mix.value if isinstance(error_mix, GdopPreset) else model.kind.value
        azimuths = np.arange(0.0, 181.0, 1.0) if azimuths_deg is None else np.asarray(azimuths_deg, dtype=float)

        baseline_bearing, _ = GeometryHelper.az_el(rx - tx)
        meas_cov = model.covariance()
        values = np.empty(azimuths.size)
        for k, az in enumerate(azimuths):
            p = rx + target_range_from_rx * GeometryHelper.direction(baseline_bearing + az, elevation_deg)
            try:
                values[k] = self.gdop(self.bistatic_jacobian(tx, rx, p), meas_cov)
            except GeometryError:
                values[k] = float("inf")

        elapsed = time.perf_counter() - start
        logger.info(
            f"[{self.__class__.__name__}] GDOP scan '{preset_name}' at {target_range_from_rx:.0f} m: "
            f"max {np.max(values):.3f} m ({elapsed:.4f}s)"
        )
        return GdopCurve(azimuth_deg=azimuths, gdop_m=values, preset=preset_name, target_range_m=float(target_range_from_rx))

    def fix_from_measurement(
        self,
        tx: np.ndarray,
        rx: np.ndarray,
        range_sum: float,
        azimuth_deg: float,
        elevation_deg: float,
        model: MeasModel,
        detection: Optional[Detection] = None,
    ) -> MeasurementFix:
        """Bistatic fix with first-order covariance J^-1 R J^-T."""
        if model.kind != MeasKind.BISTATIC:
            raise ValueError(f"bistatic fixes need a bistatic measurement model, got {model.kind.value}")
        direction = GeometryHelper.direction(azimuth_deg, elevation_deg)
        position = self.bistatic_solve(tx, rx, range_sum, direction)
        j = self.bistatic_jacobian(tx, rx, position)
        try:
            j_inv = np.linalg.inv(j)
        except np.linalg.LinAlgError as e:
            raise GeometryError("singular measurement Jacobian") from e
        covariance = j_inv @ model.covariance() @ j_inv.T
        covariance = 0.5 * (covariance + covariance.T)
        return MeasurementFix(position=position, covariance=covariance, detection=detection,
                              condition_number=float(np.linalg.cond(j)))

    # --- TDOA ---

    @staticmethod
    def tdoa_residual(anchors: np.ndarray, range_differences: np.ndarray, p: np.ndarray) -> np.ndarray:
        anchors = np.asarray(anchors, dtype=float)
        d = np.linalg.norm(np.asarray(p, dtype=float) - anchors, axis=1)
        return d[1:] - d[0] - np.asarray(range_differences, dtype=float)

    @staticmethod
    def tdoa_jacobian(anchors: np.ndarray, p: np.ndarray) -> np.ndarray:
        anchors = np.asarray(anchors, dtype=float)
        diff = np.asarray(p, dtype=float) - anchors
        norms = np.linalg.norm(diff, axis=1)
        if np.any(norms < GeometryHelper.EPS):
            raise GeometryError("position coincides with an anchor")
        units = diff / norms[:, None]
        return units[1:] - units[0]

    def tdoa_gdop(self, anchors: np.ndarray, p: np.ndarray, sigma: float = 1.0) -> float:
        j = self.tdoa_jacobian(anchors, p)
        return self.gdop(j, sigma ** 2 * np.eye(j.shape[0]))

    def tdoa_multilaterate(
        self,
        anchors: Sequence[np.ndarray],
        range_differences: Sequence[float],
        initial_guess: np.ndarray,
        model: Optional[MeasModel] = None,
        check_ghost: bool = True,
    ) -> MeasurementFix:
        """
        Gauss-Newton fit of sum_i (|p - a_i| - |p - a_0| - delta_i)^2 with step halving,
        started from initial_guess. The covariance scales with model.sigma_range_difference
        (default: a TDOA model with 1 m).

        The ghost check restarts from the reflection of the solution through the anchors'
        best-fit plane; a distinct minimum whose residual is within 10x of the best one
        sets the ghost flag.

        Raises:
            TdoaDivergenceError: no convergence within 50 iterations.
            RankDeficientError: Jacobian rank < 3.
        """
        model = model or MeasModel.for_tdoa(1.0)
        if model.kind != MeasKind.TDOA or model.sigma_range_difference is None:
            raise ValueError("TDOA fixes need a TDOA measurement model with sigma_range_difference")
        anchors = np.asarray(anchors, dtype=float)
        deltas = np.asarray(range_differences, dtype=float)
        if anchors.shape[0] < 4:
            raise ValueError("TDOA needs at least 4 anchors")
        if deltas.shape[0] != anchors.shape[0] - 1:
            raise ValueError("one range difference per non-reference anchor")

        p, residual, iterations = self._gauss_newton(anchors, deltas, np.asarray(initial_guess, dtype=float))
        ghost = False

        if check_ghost:
            centroid, normal = GeometryHelper.best_fit_plane(anchors)
            if abs(np.dot(p - centroid, normal)) > 1e-6:
                mirror_start = GeometryHelper.reflect(p, centroid, normal)
                try:
                    p_ghost, residual_ghost, _ = self._gauss_newton(anchors, deltas, mirror_start)
                    distinct = np.linalg.norm(p_ghost - p) > max(1.0, 1e-3 * np.linalg.norm(p))
                    if distinct and residual_ghost <= self.GHOST_RESIDUAL_FACTOR * residual + 1e-9:
                        ghost = True
                        logger.warning(
                            f"[{self.__class__.__name__}] ⚠️ Ghost intersection at {np.round(p_ghost, 2).tolist()} "
                            f"(residual {residual_ghost:.3e} vs {residual:.3e})"
                        )
                        if residual_ghost < residual:
                            p, residual = p_ghost, residual_ghost
                except (TdoaDivergenceError, RankDeficientError):
                    pass

        j = self.tdoa_jacobian(anchors, p)
        covariance = model.sigma_range_difference ** 2 * np.linalg.inv(j.T @ j)
        return MeasurementFix(position=p, covariance=0.5 * (covariance + covariance.T),
                              condition_number=float(np.linalg.cond(j)), residual=residual,
                              ghost=ghost, iterations=iterations)

    # --- HELPERS ---

    def _gauss_newton(self, anchors: np.ndarray, deltas: np.ndarray, p0: np.ndarray) -> Tuple[np.ndarray, float, int]:
        p = p0.copy()
        res = self.tdoa_residual(anchors, deltas, p)
        cost = float(res @ res)

        for iteration in range(1, self.MAX_ITERATIONS + 1):
            j = self.tdoa_jacobian(anchors, p)
            if np.linalg.matrix_rank(j) < 3:
                raise RankDeficientError("TDOA Jacobian is rank deficient")
            step, *_ = np.linalg.lstsq(j, -res, rcond=None)

            scale = 1.0
            while True:
                candidate = p + scale * step
                res_candidate = self.tdoa_residual(anchors, deltas, candidate)
                cost_candidate = float(res_candidate @ res_candidate)
                if cost_candidate <= cost or scale < 1e-12:
                    break
                scale *= 0.5

            if cost_candidate > cost:
                # no descent left along the Gauss-Newton direction
                return p, float(np.sqrt(cost)), iteration
            p, res, cost = candidate, res_candidate, cost_candidate
            if np.linalg.norm(scale * step) < self.STEP_TOLERANCE or np.sqrt(cost) < 1e-13:
                return p, float(np.sqrt(cost)), iteration

        raise TdoaDivergenceError(f"Gauss-Newton did not converge in {self.MAX_ITERATIONS} iterations")
