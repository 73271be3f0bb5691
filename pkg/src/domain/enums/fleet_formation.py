from enum import Enum


class FleetFormation(str, Enum):
    RANDOM = "random"
    SWARM = "swarm"
