import hashlib
import json
import os
from typing import Any, Dict, Optional

from src.core.logger import logger
from src.domain.models.run.run_manifest import ArtifactEntry, RunManifest

MANIFEST_NAME = "manifest.json"
LOG_DIR = "logs"


class ManifestWriter:
    """Hashes every artifact under the output directory (logs excluded) into manifest.json."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir

    @staticmethod
    def sha256(path: str) -> str:
        digest = hashlib.sha256()
        with open(path, "rb") as f:
            for chunk in iter(lambda: f.read(1 << 20), b""):
                digest.update(chunk)
        return digest.hexdigest()

    def write_json(self, name: str, body: Dict[str, Any]) -> str:
        path = os.path.join(self.out_dir, name)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(body, f, indent=2, sort_keys=True, allow_nan=False)
            f.write("\n")
        return path

    def write(self, command: str, config: Dict[str, Any], seed: Optional[int], duration_s: float) -> RunManifest:
        artifacts = []
        for root, dirs, files in os.walk(self.out_dir):
            dirs[:] = sorted(d for d in dirs if not (root == self.out_dir and d == LOG_DIR))
            for name in sorted(files):
                rel = os.path.relpath(os.path.join(root, name), self.out_dir).replace(os.sep, "/")
                if rel == MANIFEST_NAME:
                    continue
                full = os.path.join(root, name)
                artifacts.append(ArtifactEntry(path=rel, sha256=self.sha256(full), bytes=os.path.getsize(full)))

        manifest = RunManifest(command=command, config=config, seed=seed,
                               artifacts=artifacts, duration_s=round(duration_s, 3))
        self.write_json(MANIFEST_NAME, manifest.model_dump(mode="json"))
        logger.info(f"[{self.__class__.__name__}] ✅ Manifest with {len(artifacts)} artifacts")
        return manifest
