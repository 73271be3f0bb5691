from enum import Enum


class GdopPreset(Enum):
    """Measurement error mixes for GDOP sweeps: (name, sigma_range_sum m, sigma_angle deg)."""

    AOA = ("aoa", 0.1, 1.0)
    TDOA = ("tdoa", 15.0, 0.05)

    def __new__(cls, value, sigma_range_sum_m, sigma_angle_deg):
        obj = object.__new__(cls)
        obj._value_ = value
        obj.sigma_range_sum_m = sigma_range_sum_m
        obj.sigma_angle_deg = sigma_angle_deg
        return obj
