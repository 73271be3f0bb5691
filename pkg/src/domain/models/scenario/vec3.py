import math
from typing import Any

import numpy as np
from pydantic import field_validator, model_validator

from src.domain.models.scenario.config_model import ConfigModel


class Vec3(ConfigModel):
    x: float
    y: float
    z: float

    @model_validator(mode="before")
    @classmethod
    def accept_sequence(cls, data: Any) -> Any:
        # [x, y, z] is accepted as shorthand in documents
        if isinstance(data, (list, tuple)):
            if len(data) != 3:
                raise ValueError("a position needs exactly 3 components")
            return {"x": data[0], "y": data[1], "z": data[2]}
        return data

    @field_validator("x", "y", "z")
    @classmethod
    def finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("components must be finite")
        return v

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "Vec3":
        return cls(x=float(arr[0]), y=float(arr[1]), z=float(arr[2]))
