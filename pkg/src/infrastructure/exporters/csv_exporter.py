import os

import pandas as pd

from src.core.logger import logger


class CsvExporter:
    """UTF-8, comma-delimited CSV with a header row, written once per file."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir

    def write(self, name: str, frame: pd.DataFrame) -> str:
        path = os.path.join(self.out_dir, name)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.9g")
        logger.debug(f"[{self.__class__.__name__}] {name}: {len(frame)} rows")
        return path
