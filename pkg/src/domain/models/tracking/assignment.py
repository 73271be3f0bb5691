from dataclasses import dataclass, field
from typing import List, Tuple


@dataclass(frozen=True)
class Assignment:
    pairs: List[Tuple[int, int]] = field(default_factory=list)
    unassigned_tracks: List[int] = field(default_factory=list)
    unassigned_fixes: List[int] = field(default_factory=list)
    total_cost: float = 0.0
