from typing import Tuple

import numpy as np

from src.application.utils.geometry_helper import GeometryHelper
from src.domain.enums.element_pattern import ElementPattern
from src.domain.models.scenario.upa_config import UpaConfig


class ArrayHelper:
    """
    UPA model: element (ix, iy) sits at spacing * (ix_c * h + iy_c * v) wavelengths from
    the array centre, with h/v the face axes from GeometryHelper.array_axes and ix_c, iy_c
    centred indices. Elements are flattened with q = ix * ny + iy.
    """

    @staticmethod
    def centred_indices(n: int) -> np.ndarray:
        return np.arange(n) - (n - 1) / 2.0

    @staticmethod
    def element_offsets(a: UpaConfig) -> Tuple[np.ndarray, np.ndarray]:
        ix, iy = np.meshgrid(ArrayHelper.centred_indices(a.nx), ArrayHelper.centred_indices(a.ny), indexing="ij")
        return ix.ravel(), iy.ravel()

    @staticmethod
    def face_projections(a: UpaConfig, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Direction cosines onto (h, v, b) for unit directions (..., 3)."""
        b, h, v = GeometryHelper.array_axes(a.boresight_azimuth, a.boresight_elevation)
        directions = np.asarray(directions, dtype=float)
        return directions @ h, directions @ v, directions @ b

    @staticmethod
    def steering(a: UpaConfig, directions: np.ndarray) -> np.ndarray:
        """Unit-modulus steering vectors, shape (..., Q)."""
        ph, pv, _ = ArrayHelper.face_projections(a, directions)
        ix, iy = ArrayHelper.element_offsets(a)
        phase = 2 * np.pi * a.spacing * (ph[..., None] * ix + pv[..., None] * iy)
        return np.exp(1j * phase)

    @staticmethod
    def array_factor_power(a: UpaConfig, directions: np.ndarray) -> np.ndarray:
        """|sum_q s_q|^2, evaluated separably along the two face axes."""
        ph, pv, _ = ArrayHelper.face_projections(a, directions)
        af_h = np.exp(1j * 2 * np.pi * a.spacing * ph[..., None] * ArrayHelper.centred_indices(a.nx)).sum(axis=-1)
        af_v = np.exp(1j * 2 * np.pi * a.spacing * pv[..., None] * ArrayHelper.centred_indices(a.ny)).sum(axis=-1)
        return np.abs(af_h) ** 2 * np.abs(af_v) ** 2

    @staticmethod
    def element_gain(a: UpaConfig, directions: np.ndarray) -> np.ndarray:
        """Isotropic: 1. Cosine: 2(q+1) cos^q of the off-boresight angle, zero behind the face."""
        _, _, pb = ArrayHelper.face_projections(a, directions)
        if a.element_pattern == ElementPattern.ISOTROPIC:
            return np.ones_like(pb)
        q = a.element_exponent
        return 2.0 * (q + 1.0) * np.clip(pb, 0.0, None) ** q

    @staticmethod
    def dft_beams(a: UpaConfig) -> np.ndarray:
        """
        Orthonormal DFT beam set, shape (Q, Q): row b steers to spatial frequencies
        (k / nx, l / ny) cycles per element, with b = k * ny + l. The beams tile the
        visible region and map white element noise to white beam noise.
        """
        fx = np.fft.fftfreq(a.nx)
        fy = np.fft.fftfreq(a.ny)
        kx, ky = np.meshgrid(fx, fy, indexing="ij")
        ix, iy = ArrayHelper.element_offsets(a)
        phase = 2 * np.pi * (kx.ravel()[:, None] * ix + ky.ravel()[:, None] * iy)
        return np.exp(1j * phase) / np.sqrt(a.n_elements)
