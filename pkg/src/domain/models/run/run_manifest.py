from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class ArtifactEntry(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    path: str
    sha256: str
    bytes: int


class RunManifest(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    command: str
    config: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    artifacts: List[ArtifactEntry] = Field(default_factory=list)
    duration_s: float = 0.0
