from pydantic import model_validator

from src.domain.models.scenario.config_model import ConfigModel


class BoxRegion(ConfigModel):
    """Axis-aligned horizontal box (m)."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    @model_validator(mode="after")
    def ordered(self) -> "BoxRegion":
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("region bounds must satisfy min < max")
        return self

    @classmethod
    def centered(cls, cx: float, cy: float, width: float, depth: float) -> "BoxRegion":
        return cls(x_min=cx - width / 2, x_max=cx + width / 2, y_min=cy - depth / 2, y_max=cy + depth / 2)
