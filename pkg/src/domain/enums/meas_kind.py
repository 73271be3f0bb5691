from enum import Enum


class MeasKind(str, Enum):
    BISTATIC = "bistatic"
    TDOA = "tdoa"
