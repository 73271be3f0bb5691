from enum import Enum


class ElementPattern(str, Enum):
    ISOTROPIC = "isotropic"
    COSINE = "cosine"
