from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class ArraySnapshot:
    values: np.ndarray
    group: int = 0
