import time
from typing import Iterable, Optional, Tuple

import numpy as np
from scipy.constants import Boltzmann, c as SPEED_OF_LIGHT

from src.application.services.scenario_service import ScenarioService
from src.application.utils.array_helper import ArrayHelper
from src.application.utils.geometry_helper import GeometryHelper
from src.core.exceptions import EstimationError, GeometryError
from src.core.logger import logger
from src.domain.enums.rcs_fluctuation import RcsFluctuation
from src.domain.models.scenario.scenario_config import ScenarioConfig
from src.domain.models.scenario.upa_config import UpaConfig
from src.domain.models.scenario.waveform_config import WaveformConfig
from src.domain.models.sensing.bistatic_geometry import BistaticGeometry
from src.domain.models.sensing.echo_tensor import EchoTensor
from src.domain.models.sensing.link_budget import LinkBudget
from src.domain.models.sensing.trajectory_state import TrajectoryState


class AirlinkService:
    """
    Bistatic geometry, UPA gains, the bistatic radar equation and per-CPI echo synthesis.

    Echo calibration: tensor entries are expressed in units of the per-sample noise
    standard deviation. A target contributes |a|^2 = rx_echo_power / noise_power_per_sample
    to every entry of every element, where rx_echo_power uses the full transmit array gain
    and the receive *element* gain (the receive array gain is realised by processing).
    Noise entries are CN(0, 1).
    """

    def __init__(self, scenario_service: Optional[ScenarioService] = None):
        self.scenario_service = scenario_service or ScenarioService()

    @staticmethod
    def geometry(tx: np.ndarray, rx: np.ndarray, target: TrajectoryState, wavelength: float) -> BistaticGeometry:
        tx = np.asarray(tx, dtype=float)
        rx = np.asarray(rx, dtype=float)
        to_target_tx = target.position - tx
        to_target_rx = target.position - rx
        d_tx = float(np.linalg.norm(to_target_tx))
        d_rx = float(np.linalg.norm(to_target_rx))
        if d_tx < GeometryHelper.EPS or d_rx < GeometryHelper.EPS:
            raise GeometryError("target coincides with a station")

        u_tx = to_target_tx / d_tx
        u_rx = to_target_rx / d_rx
        # closing target => positive Doppler
        doppler = -float(np.dot(target.velocity, u_tx) + np.dot(target.velocity, u_rx)) / wavelength
        az, el = GeometryHelper.az_el(to_target_rx)
        tx_az, tx_el = GeometryHelper.az_el(to_target_tx)

        return BistaticGeometry(
            d_tx=d_tx,
            d_rx=d_rx,
            baseline=float(np.linalg.norm(tx - rx)),
            range_sum=d_tx + d_rx,
            doppler=doppler,
            azimuth=az,
            elevation=el,
            tx_azimuth=tx_az,
            tx_elevation=tx_el,
        )

    @staticmethod
    def upa_gain(a: UpaConfig, azimuth, elevation):
        """
        Linear power gain |AF|^2 / Q times the element pattern, so the boresight
        gain is nx*ny times the element boresight gain. Broadcasts over angle arrays.
        """
        directions = GeometryHelper.direction(azimuth, elevation)
        gain = ArrayHelper.array_factor_power(a, directions) / a.n_elements * ArrayHelper.element_gain(a, directions)
        return float(gain) if np.ndim(gain) == 0 else gain

    @staticmethod
    def element_gain(a: UpaConfig, azimuth, elevation):
        gain = ArrayHelper.element_gain(a, GeometryHelper.direction(azimuth, elevation))
        return float(gain) if np.ndim(gain) == 0 else gain

    @staticmethod
    def noise_power(w: WaveformConfig) -> float:
        return Boltzmann * w.noise_temp * w.bandwidth * 10 ** (w.noise_figure / 10)

    @staticmethod
    def received_power(w: WaveformConfig, d_tx, d_rx, gt, gr, rcs):
        """Bistatic radar equation; broadcasts over distance and gain arrays."""
        return (w.tx_power * gt * gr * w.wavelength ** 2 * rcs) / ((4 * np.pi) ** 3 * np.square(d_tx) * np.square(d_rx))

    def bistatic_snr(self, w: WaveformConfig, g: BistaticGeometry, gains: Tuple[float, float], rcs: float) -> LinkBudget:
        gt, gr = gains
        if min(gt, gr, rcs, g.d_tx, g.d_rx) <= 0:
            raise ValueError("gains, rcs and distances must be > 0")

        rx_power = float(self.received_power(w, g.d_tx, g.d_rx, gt, gr, rcs))
        noise = self.noise_power(w)
        snr_single = 10 * np.log10(rx_power / noise)
        integration_gain = 10 * np.log10(w.n_subcarriers * w.n_symbols_per_cpi)
        return LinkBudget(
            rx_echo_power=rx_power,
            noise_power_per_sample=noise,
            snr_single_sample=float(snr_single),
            integration_gain=float(integration_gain),
            snr_post_integration=float(snr_single + integration_gain),
        )

    def clutter_field(self, scn: ScenarioConfig) -> Tuple[np.ndarray, np.ndarray]:
        """Stationary ground scatterers, fixed for the whole run: positions (S, 3) and reflectivities (S,)."""
        n = scn.clutter.n_scatterers
        if n == 0 or scn.clutter.region is None:
            return np.zeros((0, 3)), np.zeros(0, dtype=complex)
        rng = self.scenario_service.spawn_rng(scn.seed, "clutter")
        region = scn.clutter.region
        positions = np.column_stack([
            rng.uniform(region.x_min, region.x_max, n),
            rng.uniform(region.y_min, region.y_max, n),
            np.zeros(n),
        ])
        reflectivity = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        return positions, reflectivity

    def synthesize_cpi(
        self,
        scn: ScenarioConfig,
        truth: Iterable[TrajectoryState],
        rng: np.random.Generator,
        cpi_index: int = 0,
        include_clutter: bool = True,
        include_noise: bool = True,
    ) -> EchoTensor:
        """
        Synthesises the (Q, N, M) echo tensor of one CPI: stop-and-hop targets, zero-Doppler
        ground clutter scaled to clutter.scr_target against the strongest target, white noise.
        """
        start = time.perf_counter()
        w = scn.waveform
        tx_station, rx_station = scn.transmitter, scn.receiver
        tx = tx_station.position.as_array()
        rx = rx_station.position.as_array()
        q_count = rx_station.array.n_elements
        n_idx = np.arange(w.n_subcarriers)
        m_idx = np.arange(w.n_symbols_per_cpi)
        rcs_by_id = {u.id: u for u in scn.fleet.uavs}

        coeffs, delay_vecs, doppler_vecs = [], [], []
        target_powers = []

        for state in truth:
            if np.shape(state.position) != (3,):
                raise EstimationError("truth positions must be 3-vectors")
            g = self.geometry(tx, rx, state, w.wavelength)
            uav = rcs_by_id.get(state.uav_id)
            rcs = uav.rcs_mean if uav else scn.fleet.rcs_mean
            if uav and uav.rcs_fluctuation == RcsFluctuation.SWERLING1:
                rcs = rng.exponential(rcs)
            gt = self.upa_gain(tx_station.array, g.tx_azimuth, g.tx_elevation)
            gr = self.element_gain(rx_station.array, g.azimuth, g.elevation)
            power = self._entry_power(w, g.d_tx, g.d_rx, gt, gr, rcs)
            amplitude = np.sqrt(power) * np.exp(-2j * np.pi * w.carrier_freq * g.delay)
            steering = ArrayHelper.steering(rx_station.array, GeometryHelper.direction(g.azimuth, g.elevation))

            coeffs.append(amplitude * steering)
            delay_vecs.append(np.exp(-2j * np.pi * n_idx * w.scs * g.delay))
            doppler_vecs.append(np.exp(2j * np.pi * m_idx * w.symbol_duration * g.doppler))
            target_powers.append(power)

        target_power = max(target_powers) if target_powers else 0.0
        clutter_power = 0.0
        if include_clutter:
            clutter_power = self._append_clutter(scn, tx, rx, target_power, coeffs, delay_vecs, doppler_vecs)

        data = np.zeros((q_count, w.n_subcarriers, w.n_symbols_per_cpi), dtype=np.complex64)
        if coeffs:
            c = np.asarray(coeffs)          # (K, Q)
            dv = np.asarray(delay_vecs)     # (K, N)
            mv = np.asarray(doppler_vecs)   # (K, M)
            for q in range(q_count):
                data[q] = (dv.T * c[:, q]) @ mv

        if include_noise:
            noise = rng.standard_normal((2,) + data.shape, dtype=np.float32)
            data += ((noise[0] + 1j * noise[1]) / np.sqrt(2)).astype(np.complex64)

        elapsed = time.perf_counter() - start
        logger.debug(
            f"[{self.__class__.__name__}] CPI {cpi_index} synthesised: {len(target_powers)} targets, "
            f"tensor {data.shape} ({elapsed:.4f}s)"
        )
        return EchoTensor(data=data, cpi_index=cpi_index, waveform=w,
                          target_power=float(target_power), clutter_power=float(clutter_power))

    # --- HELPERS ---

    def _entry_power(self, w: WaveformConfig, d_tx, d_rx, gt, gr, rcs):
        return self.received_power(w, d_tx, d_rx, gt, gr, rcs) / self.noise_power(w)

    def _append_clutter(self, scn, tx, rx, target_power, coeffs, delay_vecs, doppler_vecs) -> float:
        positions, reflectivity = self.clutter_field(scn)
        if positions.shape[0] == 0:
            return 0.0

        w = scn.waveform
        tx_station, rx_station = scn.transmitter, scn.receiver
        n_idx = np.arange(w.n_subcarriers)
        raw = []
        geoms = []
        for p in positions:
            g = self.geometry(tx, rx, TrajectoryState(time=0.0, position=p, velocity=np.zeros(3)), w.wavelength)
            gt = self.upa_gain(tx_station.array, g.tx_azimuth, g.tx_elevation)
            gr = self.element_gain(rx_station.array, g.azimuth, g.elevation)
            raw.append(self._entry_power(w, g.d_tx, g.d_rx, gt, gr, scn.fleet.rcs_mean))
            geoms.append(g)

        raw = np.asarray(raw) * np.abs(reflectivity) ** 2
        total = float(raw.sum())
        if target_power > 0 and total > 0:
            # calibrate total clutter power to the requested SCR against the strongest target
            scale = target_power / 10 ** (scn.clutter.scr_target / 10) / total
        else:
            scale = 1.0

        for g, refl, p_raw in zip(geoms, reflectivity, raw):
            amplitude = np.sqrt(p_raw * scale) * np.exp(1j * np.angle(refl)) * np.exp(-2j * np.pi * w.carrier_freq * g.delay)
            steering = ArrayHelper.steering(rx_station.array, GeometryHelper.direction(g.azimuth, g.elevation))
            coeffs.append(amplitude * steering)
            delay_vecs.append(np.exp(-2j * np.pi * n_idx * w.scs * g.delay))
            doppler_vecs.append(np.ones(w.n_symbols_per_cpi, dtype=complex))
        return total * scale
