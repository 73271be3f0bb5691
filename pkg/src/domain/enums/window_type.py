from enum import Enum


class WindowType(str, Enum):
    RECT = "rect"
    HANN = "hann"
