from typing import Tuple

import numpy as np

from src.core.exceptions import GeometryError


class GeometryHelper:
    """Frame conventions shared by every module: ENU axes, azimuth from +x
    counter-clockwise in the horizontal plane, elevation from horizontal."""

    EPS = 1e-9

    @staticmethod
    def unit(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if n < GeometryHelper.EPS:
            raise GeometryError("zero-length vector has no direction")
        return v / n

    @staticmethod
    def az_el(v: np.ndarray) -> Tuple[float, float]:
        """Azimuth and elevation (deg) of a direction vector."""
        v = np.asarray(v, dtype=float)
        if np.linalg.norm(v) < GeometryHelper.EPS:
            raise GeometryError("zero-length vector has no direction")
        az = np.degrees(np.arctan2(v[1], v[0]))
        el = np.degrees(np.arctan2(v[2], np.hypot(v[0], v[1])))
        return float(az), float(el)

    @staticmethod
    def direction(azimuth_deg, elevation_deg) -> np.ndarray:
        """Unit vector(s) for azimuth/elevation in degrees; broadcasts, last axis = xyz."""
        az = np.radians(azimuth_deg)
        el = np.radians(elevation_deg)
        return np.stack([np.cos(el) * np.cos(az), np.cos(el) * np.sin(az), np.sin(el)], axis=-1)

    @staticmethod
    def array_axes(boresight_azimuth: float, boresight_elevation: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Orthonormal frame of an array face.

        Returns:
            (b, h, v): boresight, horizontal face axis, vertical face axis (v = b x h).
        """
        b = GeometryHelper.direction(boresight_azimuth, boresight_elevation)
        az = np.radians(boresight_azimuth)
        h = np.array([-np.sin(az), np.cos(az), 0.0])
        v = np.cross(b, h)
        return b, h, v

    @staticmethod
    def best_fit_plane(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Centroid and unit normal of the least-squares plane through points (n, 3)."""
        points = np.asarray(points, dtype=float)
        centroid = points.mean(axis=0)
        _, _, vt = np.linalg.svd(points - centroid)
        return centroid, vt[-1]

    @staticmethod
    def reflect(p: np.ndarray, centroid: np.ndarray, normal: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return p - 2.0 * np.dot(p - centroid, normal) * normal

    @staticmethod
    def rotation_z(angle_deg: float) -> np.ndarray:
        a = np.radians(angle_deg)
        return np.array([[np.cos(a), -np.sin(a), 0.0], [np.sin(a), np.cos(a), 0.0], [0.0, 0.0, 1.0]])
