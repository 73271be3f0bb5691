from enum import Enum


class RcsFluctuation(str, Enum):
    NONE = "none"
    SWERLING1 = "swerling1"
