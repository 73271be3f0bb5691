from pydantic import BaseModel, ConfigDict


class ConfigModel(BaseModel):
    """Base for every scenario document section: immutable, unknown keys rejected."""

    model_config = ConfigDict(frozen=True, extra="forbid", from_attributes=True)
