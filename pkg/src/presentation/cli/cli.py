import argparse
import os
import sys
import time
from typing import Callable, List, Optional

import numpy as np

from src.application.services.coverage_service import CoverageService
from src.application.services.locate_service import LocateService
from src.application.services.pipeline_service import PipelineService
from src.application.services.scenario_service import ScenarioService
from src.application.services.settings_manager import SettingsManager
from src.core.exceptions import GeometryError, ScenarioError, ScenarioParseError
from src.core.logger import attach_file_handler, detach_file_handler, logger, set_level
from src.domain.enums.beam_mode import BeamMode
from src.domain.enums.gdop_preset import GdopPreset
from src.infrastructure.exporters.binary_exporter import BinaryExporter
from src.infrastructure.exporters.csv_exporter import CsvExporter
from src.infrastructure.exporters.manifest_writer import ManifestWriter
from src.infrastructure.mappers.row_mapper import RowMapper
from worker import SweepWorker

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

DEFAULT_GDOP_TX = (0.0, 0.0, 0.0)
DEFAULT_GDOP_RX = (500.0, 0.0, 0.0)


class CommandLineApp:
    """`simulate`, `sweep`, `gdop` and `coverage`. Every command writes only under --out."""

    def __init__(self, settings: Optional[SettingsManager] = None):
        self.settings = settings or SettingsManager()
        self.scenario_service = ScenarioService()

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog="isac-airspace", description="Bistatic ISAC low-altitude airspace simulator")
        sub = parser.add_subparsers(dest="command", required=True)

        sim = sub.add_parser("simulate", help="end-to-end detection and tracking run")
        sim.add_argument("config")
        sim.add_argument("--seed", type=int, default=None)
        sim.add_argument("--out", required=True)
        sim.add_argument("--dump-tensors", action="store_true", help="binary echo tensor per CPI")
        sim.add_argument("--dump-rd", action="store_true", help="range-Doppler map CSV per CPI")

        sweep = sub.add_parser("sweep", help="bandwidth x pfa x seed grid of runs")
        sweep.add_argument("config")
        sweep.add_argument("--bandwidths", type=float, nargs="+", required=True)
        sweep.add_argument("--pfas", type=float, nargs="+", required=True)
        sweep.add_argument("--seeds", type=int, nargs="+", required=True)
        sweep.add_argument("--out", required=True)
        sweep.add_argument("--jobs", type=int, default=None, help="worker processes (default: logical cores)")

        gdop = sub.add_parser("gdop", help="GDOP versus azimuth")
        gdop.add_argument("--preset", choices=[p.value for p in GdopPreset], default=None)
        gdop.add_argument("--range", dest="target_range", type=float, default=300.0)
        gdop.add_argument("--elevation", type=float, default=30.0)
        gdop.add_argument("--config", default=None, help="take tx/rx positions from a scenario")
        gdop.add_argument("--out", required=True)

        cov = sub.add_parser("coverage", help="sensing coverage grid")
        cov.add_argument("config")
        cov.add_argument("--mode", choices=[m.value for m in BeamMode], default=BeamMode.ISOTROPIC.value)
        cov.add_argument("--dim", type=int, choices=[2, 3], default=2)
        cov.add_argument("--jobs", type=int, default=None, help="worker processes (default: logical cores)")
        cov.add_argument("--out", required=True)
        return parser

    def run(self, argv: Optional[List[str]] = None) -> int:
        args = self.build_parser().parse_args(argv)
        level = self.settings.log_level()
        if level is not None:
            set_level(level)
        commands = {
            "simulate": self.cmd_simulate,
            "sweep": self.cmd_sweep,
            "gdop": self.cmd_gdop,
            "coverage": self.cmd_coverage,
        }
        try:
            return commands[args.command](args)
        except ScenarioError as e:
            print(f"config error: {e}", file=sys.stderr)
            logger.error(f"❌ Config error: {e}")
            return EXIT_CONFIG
        except Exception as e:
            logger.exception(f"❌ {args.command} failed: {e}")
            print(f"error: {e}", file=sys.stderr)
            return EXIT_RUNTIME

    # --- COMMANDS ---

    def cmd_simulate(self, args) -> int:
        scn = self._load(args.config, self.settings.resolve_seed(args.seed))

        def body(out: str) -> dict:
            csv, binary = CsvExporter(out), BinaryExporter(out)

            def dump(k, tensor, rd):
                if args.dump_tensors:
                    binary.write_tensor(tensor, f"tensors/cpi_{k:04d}.bin")
                if args.dump_rd:
                    csv.write(f"rd/cpi_{k:04d}.csv", RowMapper.rd_frame(rd.power, rd.range_axis, rd.doppler_axis))

            hook = dump if (args.dump_tensors or args.dump_rd) else None
            result = PipelineService(self.scenario_service).simulate(scn, on_cpi=hook)
            csv.write("truth.csv", RowMapper.truth_frame(result))
            csv.write("detections.csv", RowMapper.detection_frame(result))
            csv.write("tracks.csv", RowMapper.track_frame(result))
            ManifestWriter(out).write_json("report.json", result.to_report_dict())
            return scn.model_dump(mode="json")

        return self._execute("simulate", args.out, scn.seed, body)

    def cmd_sweep(self, args) -> int:
        config_text = self._read(args.config)
        base = self.scenario_service.load_scenario(config_text)
        worker = SweepWorker(self._jobs(args))
        points = worker.points(args.bandwidths, args.pfas, args.seeds)
        worker.validate(config_text, points)

        def body(out: str) -> dict:
            summaries = worker.run(config_text, points)
            CsvExporter(out).write("rmse.csv", RowMapper.summary_frame(summaries))
            return {
                "scenario": base.model_dump(mode="json"),
                "bandwidths": list(args.bandwidths),
                "pfas": list(args.pfas),
                "seeds": list(args.seeds),
            }

        return self._execute("sweep", args.out, None, body)

    def cmd_gdop(self, args) -> int:
        if args.config is not None:
            scn = self._load(args.config, None)
            tx, rx = scn.transmitter.position.as_array(), scn.receiver.position.as_array()
        else:
            tx, rx = np.array(DEFAULT_GDOP_TX), np.array(DEFAULT_GDOP_RX)
        presets = [GdopPreset(args.preset)] if args.preset else list(GdopPreset)

        def body(out: str) -> dict:
            locate = LocateService()
            curves = [locate.gdop_scan(tx, rx, args.target_range, preset, elevation_deg=args.elevation) for preset in presets]
            for curve in curves:
                if not np.all(np.isfinite(curve.gdop_m)):
                    raise GeometryError(f"degenerate geometry on the '{curve.preset}' sweep")
            CsvExporter(out).write("gdop.csv", RowMapper.gdop_frame(curves))
            return {
                "tx": tx.tolist(),
                "rx": rx.tolist(),
                "target_range_m": args.target_range,
                "elevation_deg": args.elevation,
                "presets": [p.value for p in presets],
            }

        return self._execute("gdop", args.out, None, body)

    def cmd_coverage(self, args) -> int:
        scn = self._load(args.config, None)
        mode = BeamMode(args.mode)

        def body(out: str) -> dict:
            service = CoverageService()
            grid = service.snr_field(scn, mode, service.default_grid(scn, args.dim), jobs=self._jobs(args))
            if args.dim == 2:
                CsvExporter(out).write("coverage.csv", RowMapper.coverage_frame(grid))
            else:
                BinaryExporter(out).write_coverage(grid)
            ManifestWriter(out).write_json("coverage_summary.json", service.summarize(scn, grid, mode))
            return scn.model_dump(mode="json")

        return self._execute("coverage", args.out, scn.seed, body)

    # --- HELPERS ---

    def _execute(self, command: str, out: str, seed: Optional[int], body: Callable[[str], dict]) -> int:
        start = time.perf_counter()
        os.makedirs(out, exist_ok=True)
        handler = attach_file_handler(out)
        try:
            logger.info(f"🚀 {command} -> {out}")
            config = body(out)
            ManifestWriter(out).write(command, config, seed, time.perf_counter() - start)
            logger.info(f"✅ {command} finished ({time.perf_counter() - start:.4f}s)")
            return EXIT_OK
        finally:
            detach_file_handler(handler)

    def _read(self, path: str) -> str:
        try:
            with open(path, "r", encoding="utf-8") as f:
                return f.read()
        except OSError as e:
            raise ScenarioParseError(f"cannot read config '{path}': {e}") from e

    def _load(self, path: str, seed: Optional[int]):
        return self.scenario_service.load_scenario(self._read(path), seed_override=seed)

    def _jobs(self, args) -> int:
        return args.jobs or self.settings.jobs() or os.cpu_count() or 1


def main(argv: Optional[List[str]] = None) -> int:
    return CommandLineApp().run(argv)
