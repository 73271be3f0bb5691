from enum import Enum


class MotionModel(str, Enum):
    CV = "CV"
    CA = "CA"
