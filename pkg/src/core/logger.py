import logging
from logging.handlers import TimedRotatingFileHandler
import os

# Configuración global del logger
logger = logging.getLogger("ISAC-Airspace")
logger.setLevel(os.environ.get("ISAC_AIRSPACE_LOG_LEVEL", "INFO").upper())

# Formato de salida
formatter = logging.Formatter(
    "%(asctime)s - %(levelname)s - [%(module)s.%(funcName)s] - %(message)s"
)

# Handler de consola (stderr, stdout queda libre)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.DEBUG)
console_handler.setFormatter(formatter)

logger.addHandler(console_handler)

# Evitar que se propaguen logs duplicados a root logger
logger.propagate = False


def attach_file_handler(out_dir: str) -> TimedRotatingFileHandler:
    """
    Adds the rotating run log under <out_dir>/logs so a command never writes
    outside its output directory.

    Returns:
        TimedRotatingFileHandler: the handler, to be passed to detach_file_handler.
    """
    log_dir = os.path.join(out_dir, "logs")
    os.makedirs(log_dir, exist_ok=True)

    file_handler = TimedRotatingFileHandler(
        os.path.join(log_dir, "run.log"),
        when="midnight",
        interval=1,
        backupCount=30,
        encoding="utf-8"
    )
    file_handler.setLevel(logging.INFO)
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)
    return file_handler


def detach_file_handler(handler: TimedRotatingFileHandler) -> None:
    logger.removeHandler(handler)
    handler.close()


def set_level(level: str) -> None:
    """Applies a level name (DEBUG, INFO, ...) to the console logger; unknown names raise ValueError."""
    logger.setLevel(level.upper())
