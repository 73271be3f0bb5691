from enum import Enum


class BeamMode(str, Enum):
    ISOTROPIC = "isotropic"
    BEAM = "beam"
