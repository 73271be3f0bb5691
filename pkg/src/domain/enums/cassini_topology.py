from enum import Enum


class CassiniTopology(str, Enum):
    CONNECTED = "connected"
    LEMNISCATE = "lemniscate"
    TWO_LOBES = "two_lobes"
