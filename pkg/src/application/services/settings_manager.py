import logging
import os
from pathlib import Path
from typing import Optional

from src.core.logger import logger


class SettingsManager:
    """
    Runtime settings from ISAC_AIRSPACE_* environment variables, with an optional
    KEY=VALUE settings file as fallback. Environment values win over the file.
    """

    KEYS = (
        'ISAC_AIRSPACE_SEED',
        'ISAC_AIRSPACE_JOBS',
        'ISAC_AIRSPACE_LOG_LEVEL',
    )

    def __init__(self, filepath: str = 'settings.env'):
        self.settings = {}
        self._load_file(filepath)
        self._load_env()
        logger.debug(f"[SettingsManager] Loaded keys: {sorted(self.settings)}")

    def _load_env(self):
        for key in self.KEYS:
            value = os.environ.get(key)
            if value:
                self.settings[key] = value
                logger.debug(f"[SettingsManager] Loaded setting from env: {key}")

    def _load_file(self, filepath: str):
        """
        Carga ajustes desde un archivo de texto con formato KEY=VALUE.
        """
        path = Path(filepath)
        if not path.is_file():
            return

        with path.open("r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith("#") or "=" not in line:
                    continue
                key, value = line.split("=", 1)
                self.settings[key.strip()] = value.strip()
        logger.debug(f"[SettingsManager] Finished loading settings from '{filepath}'.")

    def get(self, key: str, default=None):
        return self.settings.get(key, default)

    def __getitem__(self, key: str):
        return self.get(key)

    def _get_int(self, key: str) -> Optional[int]:
        raw = self.get(key)
        if raw is None:
            return None
        try:
            return int(raw)
        except ValueError:
            logger.warning(f"[SettingsManager] ⚠️ Ignoring non-integer {key}={raw!r}")
            return None

    def seed(self) -> Optional[int]:
        return self._get_int('ISAC_AIRSPACE_SEED')

    def jobs(self) -> Optional[int]:
        return self._get_int('ISAC_AIRSPACE_JOBS')

    def log_level(self) -> Optional[str]:
        raw = self.get('ISAC_AIRSPACE_LOG_LEVEL')
        if raw is None:
            return None
        level = raw.strip().upper()
        if level not in logging.getLevelNamesMapping():
            logger.warning(f"[SettingsManager] ⚠️ Ignoring unknown ISAC_AIRSPACE_LOG_LEVEL={raw!r}")
            return None
        return level

    def resolve_seed(self, cli_seed: Optional[int]) -> Optional[int]:
        """--seed beats ISAC_AIRSPACE_SEED; None leaves the config seed in place."""
        return cli_seed if cli_seed is not None else self.seed()
