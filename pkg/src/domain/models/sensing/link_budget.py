from dataclasses import dataclass


@dataclass(frozen=True)
class LinkBudget:
    rx_echo_power: float
    noise_power_per_sample: float
    snr_single_sample: float
    integration_gain: float
    snr_post_integration: float

    @property
    def snr_single_linear(self) -> float:
        return self.rx_echo_power / self.noise_power_per_sample
