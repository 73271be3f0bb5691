from dataclasses import dataclass


@dataclass(frozen=True)
class ResolutionReport:
    bandwidth: float
    delay_resolution: float
    range_sum_resolution: float
    doppler_resolution: float
    unambiguous_delay: float
    unambiguous_doppler: float
    symbol_duration: float
    cpi_duration: float
