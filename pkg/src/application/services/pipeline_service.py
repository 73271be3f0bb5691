import time
from typing import Callable, List, Optional

import numpy as np

from src.application.services.airlink_service import AirlinkService
from src.application.services.aoa_service import AoaService
from src.application.services.locate_service import LocateService
from src.application.services.mobility_service import MobilityService
from src.application.services.scenario_service import ScenarioService
from src.application.services.sensefront_service import SensefrontService
from src.application.services.tracking.scoring_service import ScoringService
from src.application.services.tracking.tracker_service import TrackerService
from src.core.exceptions import EstimationError, GeometryError
from src.core.logger import logger
from src.domain.enums.meas_kind import MeasKind
from src.domain.models.locate.located_detection import LocatedDetection
from src.domain.models.locate.meas_model import MeasModel
from src.domain.models.run.simulation_result import SimulationResult
from src.domain.models.scenario.scenario_config import ScenarioConfig
from src.domain.models.sensing.echo_tensor import EchoTensor
from src.domain.models.sensing.rd_map import RdMap

CpiHook = Callable[[int, EchoTensor, RdMap], None]


class PipelineService:
    """
    End-to-end sensing chain, one CPI at a time:
    truth -> echo synthesis -> DFT beams -> MTI -> RD map per beam -> CFAR per beam -> clustering
    -> AoA -> bistatic fix -> tracker.
    """

    def __init__(
        self,
        scenario_service: Optional[ScenarioService] = None,
        airlink_service: Optional[AirlinkService] = None,
        sensefront_service: Optional[SensefrontService] = None,
        locate_service: Optional[LocateService] = None,
    ):
        self.scenario_service = scenario_service or ScenarioService()
        self.airlink_service = airlink_service or AirlinkService(self.scenario_service)
        self.sensefront_service = sensefront_service or SensefrontService()
        self.locate_service = locate_service or LocateService()

    def measurement_model(self, scn: ScenarioConfig) -> MeasModel:
        settings = scn.run.locate
        sigma_rs = settings.sigma_range_sum
        if sigma_rs is None:
            # uniform quantisation over one range-sum bin
            sigma_rs = self.scenario_service.derived_waveform_params(scn.waveform).range_sum_resolution / np.sqrt(12)
        return MeasModel(kind=MeasKind.BISTATIC, sigma_range_sum=float(sigma_rs),
                         sigma_angle=float(np.deg2rad(settings.sigma_angle_deg)))

    def simulate(self, scn: ScenarioConfig, on_cpi: Optional[CpiHook] = None) -> SimulationResult:
        start = time.perf_counter()
        run = scn.run
        tx = scn.transmitter.position.as_array()
        rx = scn.receiver.position.as_array()
        rx_array = scn.receiver.array
        model = self.measurement_model(scn)

        aoa_service = AoaService(run.aoa)
        tracker = TrackerService(run.tracker)
        result = SimulationResult(
            resolution=self.scenario_service.derived_waveform_params(scn.waveform),
            truth=MobilityService.fleet_truth(scn.fleet.uavs, 0.0, scn.cpi_interval, scn.n_cpis),
        )
        logger.info(
            f"[{self.__class__.__name__}] 🚀 Simulating {scn.n_cpis} CPIs, {scn.fleet.fleet_size} UAVs, "
            f"B={result.resolution.bandwidth / 1e6:.1f} MHz, Pfa={run.cfar.pfa:g}"
        )

        for k, truth in enumerate(result.truth):
            rng = self.scenario_service.spawn_rng(scn.seed, f"noise/cpi{k}")
            tensor = self.airlink_service.synthesize_cpi(scn, truth.values(), rng, cpi_index=k)
            hits, rd = self.sensefront_service.beamformed_cfar(tensor, rx_array, run.cfar, run.window, run.mti)
            if on_cpi is not None:
                on_cpi(k, tensor, rd)

            detections = self.sensefront_service.cluster_detections(hits)
            located: List[LocatedDetection] = []
            for det in detections:
                located.extend(self._locate(det, tensor, aoa_service, rx_array, tx, rx, model))
            result.scr_db.append(tensor.scr_db)
            del tensor

            fixes = [ld.fix for ld in located if ld.fix is not None]
            result.history.append(tracker.step(fixes, k, scn.cpi_interval))
            result.detections.extend(located)
            logger.debug(f"[{self.__class__.__name__}] CPI {k}: {len(detections)} detections, {len(fixes)} fixes")

        result.report = ScoringService(run.tracker.match_radius).score(result.history, result.truth)

        elapsed = time.perf_counter() - start
        logger.info(
            f"[{self.__class__.__name__}] ✅ Simulation done: {result.confirmed_track_count} confirmed tracks, "
            f"swaps {result.report.swap_count} ({elapsed:.4f}s)"
        )
        return result

    # --- HELPERS ---

    def _locate(self, det, tensor, aoa_service, rx_array, tx, rx, model) -> List[LocatedDetection]:
        range_sum = det.range_sum_refined if det.range_sum_refined is not None else det.range_sum
        try:
            aoa = aoa_service.locate_direction(tensor, det.bin, rx_array)
        except EstimationError as e:
            logger.warning(f"[{self.__class__.__name__}] ⚠️ AoA failed at bin {det.bin}: {e}")
            return [LocatedDetection(detection=det)]

        located = []
        for est in aoa.estimates:
            try:
                fix = self.locate_service.fix_from_measurement(tx, rx, range_sum, est.azimuth, est.elevation, model, det)
            except (GeometryError, EstimationError) as e:
                logger.warning(f"[{self.__class__.__name__}] ⚠️ Dropping detection at bin {det.bin}: {e}")
                fix = None
            located.append(LocatedDetection(detection=det, azimuth=est.azimuth, elevation=est.elevation, fix=fix))
        return located or [LocatedDetection(detection=det)]

