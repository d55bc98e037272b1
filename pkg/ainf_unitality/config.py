"""
Runtime configuration
Defaults come from the environment; CLI flags override them. The
environment is read when the CLI starts, not at import.
"""

import os
import logging
from dataclasses import dataclass

from .errors import ConfigError

logger = logging.getLogger(__name__)

REPORT_FORMAT = 1
FILE_FORMAT = 1
FILE_CONVENTION = "sA"

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


def _positive_env(name: str, default: int) -> int:
    value = _int_env(name, default)
    if value < 1:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    # Arity truncation N used when neither a file nor a flag fixes it
    truncation: int = 4
    field: str = "rational"
    seed: int = 1
    workers: int = 1
    log_level: str = "INFO"


def load_settings() -> Settings:
    """
    Read the AINF_* variables

    Raises:
        ConfigError: a value is malformed or out of range
    """
    level = os.environ.get('AINF_LOG_LEVEL', 'INFO').upper()
    if level not in _LOG_LEVELS:
        raise ConfigError(f"AINF_LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}, got {level!r}")
    return Settings(
        truncation=_positive_env('AINF_TRUNCATION', 4),
        field=os.environ.get('AINF_FIELD') or 'rational',
        seed=_int_env('AINF_SEED', 1),
        workers=_positive_env('AINF_WORKERS', 1),
        log_level=level,
    )
