"""Environment-driven settings and logging setup."""
import logging
import os
import sys

LOG_ENV_VAR = "WFC_TERRAIN_LOG"

LOG_LEVELS = {
    "error": logging.ERROR,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

DEFAULT_MODEL_TTL = 86400

logger = logging.getLogger("wfcterrain")


def log_level_from_env() -> int:
    """Resolve the WFC_TERRAIN_LOG variable to a logging level (default info)."""
    name = os.getenv(LOG_ENV_VAR, "info").strip().lower()
    if name not in LOG_LEVELS:
        logger.warning("unknown %s value %r, using info", LOG_ENV_VAR, name)
        return logging.INFO
    return LOG_LEVELS[name]


def configure_logging(level: int | None = None) -> None:
    """Install a single stderr handler on the package logger."""
    level = log_level_from_env() if level is None else level
    handler = next((h for h in logger.handlers if getattr(h, "_wfcterrain", False)), None)
    if handler is None:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        handler._wfcterrain = True
        logger.addHandler(handler)
    else:
        handler.stream = sys.stderr
    logger.setLevel(level)


def model_ttl_from_env() -> int:
    return int(os.getenv("WFC_TERRAIN_MODEL_TTL", DEFAULT_MODEL_TTL))
