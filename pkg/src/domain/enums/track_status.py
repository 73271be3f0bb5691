from enum import Enum


class TrackStatus(Enum):
    TENTATIVE = ("tentative", "🟡")
    CONFIRMED = ("confirmed", "🟢")
    COASTING = ("coasting", "🟠")
    DELETED = ("deleted", "⚫")

    def __new__(cls, value, emoji_):
        obj = object.__new__(cls)
        obj._value_ = value
        obj.emoji = emoji_
        return obj

    @property
    def is_confirmed(self) -> bool:
        """Coasting tracks were confirmed and keep that standing until deletion."""
        return self in (TrackStatus.CONFIRMED, TrackStatus.COASTING)
