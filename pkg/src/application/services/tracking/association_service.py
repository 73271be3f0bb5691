import itertools
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.stats import chi2

from src.application.services.tracking.kalman_service import KalmanService
from src.core.exceptions import JpdaEventExplosionError
from src.core.logger import logger
from src.domain.models.locate.measurement_fix import MeasurementFix
from src.domain.models.tracking.assignment import Assignment
from src.domain.models.tracking.track import Track
from src.domain.models.tracking.tracker_config import TrackerConfig


class AssociationService:
    """Chi-square gating, GNN (rectangular Hungarian) and exact-enumeration JPDA."""

    FORBIDDEN_COST = 1e9

    def __init__(self, cfg: Optional[TrackerConfig] = None, kalman: Optional[KalmanService] = None):
        self.cfg = cfg or TrackerConfig()
        self.kalman = kalman or KalmanService(self.cfg)
        self.threshold = float(chi2.ppf(self.cfg.gate_probability, df=3))

    def gate(self, t: Track, fix: MeasurementFix) -> Tuple[bool, float]:
        nu, s = self.kalman.innovation(t, fix)
        d2 = float(nu @ np.linalg.solve(s, nu))
        return d2 <= self.threshold, d2

    def assign_costs(self, tracks: Sequence[Track], fixes: Sequence[MeasurementFix]) -> np.ndarray:
        """Mahalanobis^2 per (track, fix); inf outside the gate."""
        costs = np.full((len(tracks), len(fixes)), np.inf)
        for ti, t in enumerate(tracks):
            for fi, fix in enumerate(fixes):
                accepted, d2 = self.gate(t, fix)
                if accepted:
                    costs[ti, fi] = d2
        return costs

    @classmethod
    def solve_costs(cls, costs: np.ndarray) -> Assignment:
        """Optimal one-to-one assignment over the finite entries of a cost matrix."""
        costs = np.asarray(costs, dtype=float)
        n_tracks, n_fixes = costs.shape
        if n_tracks == 0 or n_fixes == 0:
            return Assignment(unassigned_tracks=list(range(n_tracks)), unassigned_fixes=list(range(n_fixes)))

        rows, cols = linear_sum_assignment(np.where(np.isfinite(costs), costs, cls.FORBIDDEN_COST))
        pairs = [(int(r), int(c)) for r, c in zip(rows, cols) if np.isfinite(costs[r, c])]
        used_tracks = {r for r, _ in pairs}
        used_fixes = {c for _, c in pairs}
        return Assignment(
            pairs=pairs,
            unassigned_tracks=[t for t in range(n_tracks) if t not in used_tracks],
            unassigned_fixes=[f for f in range(n_fixes) if f not in used_fixes],
            total_cost=float(sum(costs[r, c] for r, c in pairs)),
        )

    def gnn_associate(self, tracks: Sequence[Track], fixes: Sequence[MeasurementFix]) -> Assignment:
        return self.solve_costs(self.assign_costs(tracks, fixes))

    def jpda_betas(self, tracks: Sequence[Track], fixes: Sequence[MeasurementFix]) -> np.ndarray:
        """
        Association probabilities, shape (T, F + 1); column 0 is the missed-detection
        event. Tracks are split into clusters that share gated fixes and each cluster's
        feasible joint events are enumerated exactly.
        """
        n_tracks, n_fixes = len(tracks), len(fixes)
        betas = np.zeros((n_tracks, n_fixes + 1))
        betas[:, 0] = 1.0
        if n_tracks == 0 or n_fixes == 0:
            return betas

        costs = self.assign_costs(tracks, fixes)
        gated = np.isfinite(costs)
        log_likelihood = np.full(costs.shape, -np.inf)
        for ti, t in enumerate(tracks):
            for fi in np.flatnonzero(gated[ti]):
                _, s = self.kalman.innovation(t, fixes[fi])
                _, logdet = np.linalg.slogdet(2 * np.pi * s)
                log_likelihood[ti, fi] = -0.5 * (costs[ti, fi] + logdet)

        shared = csr_matrix(gated.astype(float) @ gated.T.astype(float))
        _, labels = connected_components(shared, directed=False)
        for label in np.unique(labels):
            members = np.flatnonzero(labels == label)
            self._cluster_betas(members, gated, log_likelihood, betas)
        return betas

    def jpda_update(self, tracks: Sequence[Track], fixes: Sequence[MeasurementFix]) -> List[Track]:
        """Each track updated with the beta-weighted innovation plus the spread-of-innovations term."""
        betas = self.jpda_betas(tracks, fixes)
        updated = []
        for ti, t in enumerate(tracks):
            beta_fix = betas[ti, 1:]
            weight = float(beta_fix.sum())
            if weight <= 0:
                updated.append(t)
                continue
            active = np.flatnonzero(beta_fix > 0)
            innovations = np.array([self.kalman.innovation(t, fixes[fi])[0] for fi in active])
            b = beta_fix[active]
            r = sum(bj * np.asarray(fixes[fi].covariance, dtype=float) for bj, fi in zip(b, active)) / weight

            gain, posterior = self.kalman.gain_and_posterior(t, r)
            nu = b @ innovations
            spread = (innovations * b[:, None]).T @ innovations - np.outer(nu, nu)
            beta_miss = betas[ti, 0]
            p = beta_miss * t.covariance + (1.0 - beta_miss) * posterior + gain @ spread @ gain.T
            h = self.kalman.observation(t.state.size)
            s = h @ t.covariance @ h.T + r
            updated.append(replace(t, state=t.state + gain @ nu, covariance=0.5 * (p + p.T),
                                   innovation=nu, innovation_cov=0.5 * (s + s.T)))
        return updated

    @staticmethod
    def jpda_assignment(betas: np.ndarray, gated: np.ndarray) -> Assignment:
        """Hit/miss bookkeeping for the lifecycle: a track is hit when any fix falls in its gate."""
        n_tracks, n_fixes = gated.shape
        pairs = [(t, int(np.argmax(betas[t, 1:]))) for t in range(n_tracks) if gated[t].any()]
        return Assignment(
            pairs=pairs,
            unassigned_tracks=[t for t in range(n_tracks) if not gated[t].any()],
            unassigned_fixes=[f for f in range(n_fixes) if not gated[:, f].any()],
        )

    # --- HELPERS ---

    def _cluster_betas(self, members: np.ndarray, gated: np.ndarray, log_likelihood: np.ndarray, betas: np.ndarray):
        options = []
        for ti in members:
            candidates = np.flatnonzero(gated[ti])
            if candidates.size > self.cfg.jpda_max_fixes_per_track:
                raise JpdaEventExplosionError(
                    f"track {ti} gates {candidates.size} fixes (> {self.cfg.jpda_max_fixes_per_track}); use GNN association"
                )
            options.append([None] + [int(fi) for fi in candidates])

        n_events = int(np.prod([len(o) for o in options], dtype=float))
        if n_events > self.cfg.jpda_event_cap:
            raise JpdaEventExplosionError(
                f"{n_events} joint events exceed the cap of {self.cfg.jpda_event_cap}; use GNN association"
            )

        cluster_fixes = np.flatnonzero(gated[members].any(axis=0))
        p_d = self.cfg.p_detection
        with np.errstate(divide="ignore"):
            log_pd, log_miss = np.log(p_d), np.log(1.0 - p_d)
        log_clutter = np.log(self.cfg.clutter_density)

        events, log_weights = [], []
        for event in itertools.product(*options):
            chosen = [fi for fi in event if fi is not None]
            if len(chosen) != len(set(chosen)):
                continue
            lw = (len(cluster_fixes) - len(chosen)) * log_clutter
            for ti, fi in zip(members, event):
                lw += log_miss if fi is None else log_pd + log_likelihood[ti, fi]
            events.append(event)
            log_weights.append(lw)

        log_weights = np.asarray(log_weights)
        if not np.isfinite(log_weights).any():
            logger.warning(f"[{self.__class__.__name__}] ⚠️ No feasible JPDA event for tracks {members.tolist()}")
            return
        weights = np.exp(log_weights - log_weights.max())
        weights /= weights.sum()

        betas[members, :] = 0.0
        for event, wgt in zip(events, weights):
            for ti, fi in zip(members, event):
                betas[ti, 0 if fi is None else fi + 1] += wgt
