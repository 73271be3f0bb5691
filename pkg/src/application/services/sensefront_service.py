import time
from typing import Iterator, List, Optional, Tuple

import numpy as np
import scipy.fft
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.ndimage import uniform_filter
from scipy.signal import get_window
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from src.application.utils.array_helper import ArrayHelper
from src.core.exceptions import EstimationError
from src.core.logger import logger
from src.domain.enums.window_type import WindowType
from src.domain.models.scenario.upa_config import UpaConfig
from src.domain.models.scenario.waveform_config import WaveformConfig
from src.domain.models.sensing.cfar_config import CfarConfig
from src.domain.models.sensing.detection import Detection
from src.domain.models.sensing.echo_tensor import EchoTensor
from src.domain.models.sensing.rd_map import RdMap


class SensefrontService:
    """Range-Doppler processing, MTI, 2D CA-CFAR and detection clustering."""

    @staticmethod
    def rd_axes(w: WaveformConfig, shape: tuple):
        n, m = shape
        range_axis = np.arange(n) * SPEED_OF_LIGHT / (n * w.scs)
        # j * scs / M wrapped to [-scs/2, scs/2)
        doppler_axis = np.fft.fftfreq(m, d=1.0 / w.scs)
        return range_axis, doppler_axis

    @staticmethod
    def _apply_window(h: np.ndarray, window: WindowType) -> np.ndarray:
        if window == WindowType.RECT:
            return h
        n, m = h.shape[-2:]
        taper = np.outer(get_window("hann", n), get_window("hann", m))
        return h * taper.astype(h.real.dtype)

    @staticmethod
    def _rd_transform(h: np.ndarray) -> np.ndarray:
        # unnormalised IDFT over subcarriers (-> delay), DFT over symbols (-> Doppler)
        n = h.shape[-2]
        return scipy.fft.fft(scipy.fft.ifft(h, axis=-2) * n, axis=-1)

    def range_doppler_map(self, h: np.ndarray, w: WaveformConfig, window: WindowType = WindowType.RECT) -> RdMap:
        h = np.asarray(h)
        power = np.abs(self._rd_transform(self._apply_window(h, window))) ** 2
        range_axis, doppler_axis = self.rd_axes(w, power.shape)
        return RdMap(power=power.astype(float), range_axis=range_axis, doppler_axis=doppler_axis)

    @staticmethod
    def mti_filter(h: np.ndarray) -> np.ndarray:
        """Removes the per-subcarrier mean across symbols (last axis)."""
        h = np.asarray(h)
        if h.shape[-1] < 2:
            raise EstimationError("MTI needs at least 2 symbols")
        return h - h.mean(axis=-1, keepdims=True)

    def beam_rd_maps(
        self,
        tensor: EchoTensor,
        array: UpaConfig,
        window: WindowType = WindowType.RECT,
        mti: bool = True,
        chunk: int = 8,
    ) -> Iterator[Tuple[int, RdMap]]:
        """
        Yields (beam index, RD map) for every beam of ArrayHelper.dft_beams. Each map is
        a coherent single-look map: element noise CN(0, 1) stays CN(0, 1) per beam, and a
        target inside a beam gains up to Q over a single element.
        """
        data = tensor.data
        q, n, m = data.shape
        if q != array.n_elements:
            raise EstimationError(f"tensor has {q} elements, array has {array.n_elements}")

        weights = ArrayHelper.dft_beams(array).conj().astype(data.dtype)
        flat = data.reshape(q, n * m)
        range_axis, doppler_axis = self.rd_axes(tensor.waveform, (n, m))
        for first in range(0, q, chunk):
            beams = (weights[first:first + chunk] @ flat).reshape(-1, n, m)
            if mti:
                beams = self.mti_filter(beams)
            power = np.abs(self._rd_transform(self._apply_window(beams, window))) ** 2
            for offset, beam_power in enumerate(power):
                yield first + offset, RdMap(power=beam_power.astype(float), range_axis=range_axis, doppler_axis=doppler_axis)

    @staticmethod
    def beam_pfa(pfa: float, n_beams: int) -> float:
        """Per-beam false alarm probability whose union over n_beams equals pfa."""
        return float(-np.expm1(np.log1p(-pfa) / n_beams))

    def beamformed_cfar(
        self,
        tensor: EchoTensor,
        array: UpaConfig,
        cfg: CfarConfig,
        window: WindowType = WindowType.RECT,
        mti: bool = True,
    ) -> Tuple[List[Detection], RdMap]:
        """
        CA-CFAR on every beam map at the per-beam Pfa, so a noise-only cell is flagged
        in at least one beam with probability cfg.pfa. Returns the raw hits of all
        beams and the cell-wise maximum over beams.
        """
        start = time.perf_counter()
        pfa = self.beam_pfa(cfg.pfa, array.n_elements)
        detections: List[Detection] = []
        composite = None
        for b, rd in self.beam_rd_maps(tensor, array, window, mti):
            detections.extend(self.ca_cfar_2d(rd, cfg, cpi=tensor.cpi_index, pfa=pfa, beam=b))
            composite = rd.power if composite is None else np.maximum(composite, rd.power)

        range_axis, doppler_axis = self.rd_axes(tensor.waveform, composite.shape)
        elapsed = time.perf_counter() - start
        logger.debug(
            f"[{self.__class__.__name__}] CPI {tensor.cpi_index}: {len(detections)} hits over "
            f"{array.n_elements} beams ({elapsed:.4f}s)"
        )
        return detections, RdMap(power=composite, range_axis=range_axis, doppler_axis=doppler_axis)

    @staticmethod
    def cfar_alpha(n_training: int, pfa: float) -> float:
        return n_training * (pfa ** (-1.0 / n_training) - 1.0)

    def ca_cfar_2d(
        self, rd: RdMap, cfg: CfarConfig, cpi: int = 0, pfa: Optional[float] = None, beam: int = -1
    ) -> List[Detection]:
        """
        Cell-averaging CFAR over the whole map with toroidal wrap at the edges.
        The training mean excludes the guard box around the cell under test.
        `pfa` overrides cfg.pfa.
        """
        power = rd.power
        outer, inner = cfg.window_shape, cfg.guard_shape
        if outer[0] > power.shape[0] or outer[1] > power.shape[1]:
            raise EstimationError(f"CFAR window {outer} larger than map {power.shape}")

        outer_sum = uniform_filter(power, size=outer, mode="wrap") * (outer[0] * outer[1])
        inner_sum = uniform_filter(power, size=inner, mode="wrap") * (inner[0] * inner[1])
        noise_level = (outer_sum - inner_sum) / cfg.n_training
        alpha = self.cfar_alpha(cfg.n_training, cfg.pfa if pfa is None else pfa)

        hits = np.argwhere(power > alpha * noise_level)
        detections = []
        for i, j in hits:
            z = noise_level[i, j]
            snr = 10 * np.log10(power[i, j] / z) if z > 0 else float("inf")
            r_ref, d_ref = self._refine(rd, int(i), int(j))
            detections.append(Detection(
                i=int(i), j=int(j), power=float(power[i, j]),
                range_sum=float(rd.range_axis[i]), doppler=float(rd.doppler_axis[j]),
                snr_est=float(snr), range_sum_refined=r_ref, doppler_refined=d_ref, cpi=cpi, beam=beam,
            ))
        return detections

    @staticmethod
    def cluster_detections(dets: List[Detection]) -> List[Detection]:
        """8-connected components on the bin grid, each collapsed to its strongest cell."""
        if not dets:
            return []
        coords = np.array([[d.i, d.j] for d in dets], dtype=float)
        pairs = np.array(sorted(cKDTree(coords).query_pairs(r=1.0, p=np.inf)), dtype=int).reshape(-1, 2)
        adjacency = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(dets), len(dets)))
        _, labels = connected_components(adjacency, directed=False)

        best: dict = {}
        for idx, label in enumerate(labels):
            if label not in best or dets[idx].power > dets[best[label]].power:
                best[label] = idx
        return sorted((dets[k] for k in best.values()), key=lambda d: (d.i, d.j))

    # --- HELPERS ---

    @staticmethod
    def _parabolic_offset(left: float, centre: float, right: float) -> float:
        left, centre, right = (np.log(max(v, 1e-300)) for v in (left, centre, right))
        denom = left - 2 * centre + right
        if denom >= 0:
            return 0.0
        return float(np.clip(0.5 * (left - right) / denom, -0.5, 0.5))

    def _refine(self, rd: RdMap, i: int, j: int) -> tuple:
        power = rd.power
        n, m = power.shape
        di = self._parabolic_offset(power[(i - 1) % n, j], power[i, j], power[(i + 1) % n, j])
        dj = self._parabolic_offset(power[i, (j - 1) % m], power[i, j], power[i, (j + 1) % m])
        range_step = rd.range_axis[1] - rd.range_axis[0] if n > 1 else 0.0
        doppler_step = abs(rd.doppler_axis[1] - rd.doppler_axis[0]) if m > 1 else 0.0
        return float(rd.range_axis[i] + di * range_step), float(rd.doppler_axis[j] + dj * doppler_step)
