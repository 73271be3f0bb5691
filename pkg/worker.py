import json
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from itertools import product
from typing import List, Sequence, Tuple

from tqdm import tqdm

from src.application.services.pipeline_service import PipelineService
from src.application.services.scenario_service import ScenarioService
from src.core.exceptions import ScenarioValidationError
from src.core.logger import logger
from src.domain.models.run.run_summary import RunSummary

SweepPoint = Tuple[float, float, int]


def sweep_point_text(config_text: str, bandwidth_hz: float, pfa: float) -> str:
    """Scenario document with the subcarrier count set from the bandwidth and the CFAR Pfa replaced."""
    data = json.loads(config_text)
    waveform = data.setdefault("waveform", {})
    scs = waveform.get("scs", 30e3)
    n_subcarriers = int(round(bandwidth_hz / scs))
    if n_subcarriers < 1:
        raise ScenarioValidationError("waveform.n_subcarriers", f"bandwidth {bandwidth_hz:g} Hz is below one subcarrier")
    waveform["n_subcarriers"] = n_subcarriers
    data.setdefault("run", {}).setdefault("cfar", {})["pfa"] = pfa
    return json.dumps(data)


def run_sweep_point(config_text: str, point: SweepPoint) -> RunSummary:
    """One sweep cell in its own process, with its own tracker and random streams."""
    bandwidth_hz, pfa, seed = point
    scn = ScenarioService().load_scenario(sweep_point_text(config_text, bandwidth_hz, pfa), seed_override=seed)
    result = PipelineService().simulate(scn)
    return RunSummary(
        bandwidth_hz=bandwidth_hz,
        pfa=pfa,
        seed=seed,
        rmse_m=result.report.rmse_m,
        swap_count=result.report.swap_count,
        completeness=result.report.completeness,
    )


class SweepWorker:
    """
    Runs the Cartesian product of (bandwidth, pfa, seed) on a process pool.
    Results are returned in product order regardless of completion order.
    """

    def __init__(self, jobs: int = 1):
        self.jobs = max(1, jobs)

    @staticmethod
    def points(bandwidths: Sequence[float], pfas: Sequence[float], seeds: Sequence[int]) -> List[SweepPoint]:
        return [(float(b), float(p), int(s)) for b, p, s in product(bandwidths, pfas, seeds)]

    def validate(self, config_text: str, points: Sequence[SweepPoint]) -> None:
        """Fails fast, before any output exists, on any cell whose scenario would not load."""
        service = ScenarioService()
        for bandwidth_hz, pfa in sorted({(b, p) for b, p, _ in points}):
            service.load_scenario(sweep_point_text(config_text, bandwidth_hz, pfa))

    def run(self, config_text: str, points: Sequence[SweepPoint]) -> List[RunSummary]:
        start = time.perf_counter()
        logger.info(f"[{self.__class__.__name__}] 🚀 Sweep of {len(points)} runs on {self.jobs} workers")

        results: List[RunSummary] = [None] * len(points)
        if self.jobs == 1:
            for k, point in enumerate(tqdm(points, desc="sweep", unit="run")):
                results[k] = run_sweep_point(config_text, point)
        else:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                futures = {pool.submit(run_sweep_point, config_text, point): k for k, point in enumerate(points)}
                for future in tqdm(as_completed(futures), total=len(futures), desc="sweep", unit="run"):
                    results[futures[future]] = future.result()

        elapsed = time.perf_counter() - start
        logger.info(f"[{self.__class__.__name__}] ✅ Sweep finished ({elapsed:.4f}s)")
        return results
