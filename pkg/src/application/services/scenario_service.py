import hashlib
import json
import time
from typing import Optional

import numpy as np
from pydantic import ValidationError
from scipy.constants import c as SPEED_OF_LIGHT

from src.application.services.mobility_service import MobilityService
from src.core.exceptions import ScenarioParseError, ScenarioValidationError
from src.core.logger import logger
from src.domain.enums.fleet_formation import FleetFormation
from src.domain.models.scenario.box_region import BoxRegion
from src.domain.models.scenario.resolution_report import ResolutionReport
from src.domain.models.scenario.scenario_config import ScenarioConfig
from src.domain.models.scenario.waveform_config import WaveformConfig


class ScenarioService:
    """
    Loads and validates scenario documents and owns the two pieces of global
    plumbing every other service leans on: derived waveform quantities and
    the labelled random streams.
    """

    DEFAULT_REGION_SIZE = 2000.0

    def __init__(self, mobility_service: Optional[MobilityService] = None):
        self.mobility_service = mobility_service or MobilityService()

    def load_scenario(self, text: str, seed_override: Optional[int] = None) -> ScenarioConfig:
        """
        Parses a JSON scenario document into a fully resolved ScenarioConfig.

        Args:
            text (str): JSON document with keys waveform, stations, fleet, clutter, run.
            seed_override (int, optional): replaces run.seed before the fleet is drawn.

        Returns:
            ScenarioConfig: validated config with region defaults filled and the fleet materialised.

        Raises:
            ScenarioParseError: malformed JSON or a non-object document.
            ScenarioValidationError: names the first violated field.
        """
        start = time.perf_counter()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioParseError(f"malformed scenario document: {e}") from e
        if not isinstance(data, dict):
            raise ScenarioParseError("scenario document must be a JSON object")

        scn = self._validate(data)
        if seed_override is not None:
            scn = self._validate({**scn.model_dump(), "run": {**scn.run.model_dump(), "seed": seed_override}})

        resolved = self._resolve_defaults(scn)
        # re-validate the resolved document
        resolved = self._validate(resolved.model_dump())

        elapsed = time.perf_counter() - start
        logger.info(
            f"[{self.__class__.__name__}] ✅ Scenario loaded: {resolved.fleet.fleet_size} UAVs, "
            f"{resolved.n_cpis} CPIs, seed={resolved.seed} ({elapsed:.4f}s)"
        )
        return resolved

    @staticmethod
    def derived_waveform_params(w: WaveformConfig) -> ResolutionReport:
        bandwidth = w.n_subcarriers * w.scs
        return ResolutionReport(
            bandwidth=bandwidth,
            delay_resolution=1.0 / bandwidth,
            range_sum_resolution=SPEED_OF_LIGHT / bandwidth,
            doppler_resolution=w.scs / w.n_symbols_per_cpi,
            unambiguous_delay=1.0 / w.scs,
            unambiguous_doppler=w.scs,
            symbol_duration=1.0 / w.scs,
            cpi_duration=w.n_symbols_per_cpi / w.scs,
        )

    @staticmethod
    def spawn_rng(seed: int, stream_label: str) -> np.random.Generator:
        """Independent reproducible stream per (seed, label)."""
        label_key = int.from_bytes(hashlib.sha256(stream_label.encode("utf-8")).digest()[:8], "little")
        return np.random.default_rng(np.random.SeedSequence([int(seed), label_key]))

    # --- HELPERS ---

    @staticmethod
    def _validate(data: dict) -> ScenarioConfig:
        try:
            return ScenarioConfig.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(p) for p in first.get("loc", ())) or "scenario"
            raise ScenarioValidationError(field, first.get("msg", "invalid value")) from e

    def _resolve_defaults(self, scn: ScenarioConfig) -> ScenarioConfig:
        mid = 0.5 * (scn.transmitter.position.as_array() + scn.receiver.position.as_array())
        default_region = BoxRegion.centered(mid[0], mid[1], self.DEFAULT_REGION_SIZE, self.DEFAULT_REGION_SIZE)

        bounds = scn.fleet.bounds
        if bounds.region is None:
            bounds = bounds.model_copy(update={"region": default_region})
        fleet = scn.fleet.model_copy(update={"bounds": bounds})

        clutter = scn.clutter
        if clutter.region is None:
            clutter = clutter.model_copy(update={"region": default_region})

        if not fleet.uavs and fleet.fleet_size > 0:
            rng = self.spawn_rng(scn.seed, "fleet")
            horizon = scn.n_cpis * scn.cpi_interval
            if fleet.formation == FleetFormation.SWARM:
                uavs = self.mobility_service.swarm_fleet(rng, bounds, fleet.fleet_size, fleet.swarm_spacing,
                                                         rcs_mean=fleet.rcs_mean, rcs_fluctuation=fleet.rcs_fluctuation)
            else:
                uavs = self.mobility_service.random_fleet(rng, bounds, fleet.fleet_size, horizon=horizon,
                                                          ca_fraction=fleet.ca_fraction, rcs_mean=fleet.rcs_mean,
                                                          rcs_fluctuation=fleet.rcs_fluctuation)
            fleet = fleet.model_copy(update={"uavs": uavs, "size": len(uavs)})

        return scn.model_copy(update={"fleet": fleet, "clutter": clutter})
