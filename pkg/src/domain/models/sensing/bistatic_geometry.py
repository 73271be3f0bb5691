from dataclasses import dataclass

from scipy.constants import c as SPEED_OF_LIGHT


@dataclass(frozen=True)
class BistaticGeometry:
    d_tx: float
    d_rx: float
    baseline: float
    range_sum: float
    doppler: float
    # target direction seen from the receiver (deg, receiver-centred ENU)
    azimuth: float
    elevation: float
    # target direction seen from the transmitter, for the transmit beam gain
    tx_azimuth: float = 0.0
    tx_elevation: float = 0.0

    @property
    def delay(self) -> float:
        return self.range_sum / SPEED_OF_LIGHT
