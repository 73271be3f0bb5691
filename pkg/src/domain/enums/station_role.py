from enum import Enum


class StationRole(str, Enum):
    TRANSMITTER = "transmitter"
    RECEIVER = "receiver"
