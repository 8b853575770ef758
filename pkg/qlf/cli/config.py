"""
Settings for the command-line front end.

Each setting is resolved in order: command-line flag, ``--config`` file,
environment (``QLF_*``, a ``.env`` file is loaded if present), built-in
default.
"""

import logging
import os
from dataclasses import dataclass
from typing import Dict, Optional

from dotenv import dotenv_values, load_dotenv

from ..core.errors import InvalidParameterError
from ..core.numeric import DEFAULT_PRECISION_BITS, validate_precision

# Load environment variables from .env file (if present)
load_dotenv()

logger = logging.getLogger("qlf.cli")

BACKENDS = ("complex", "exact", "both")
FORMATS = ("json", "csv")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

CONFIG_KEYS = ("prec", "backend", "format", "out")

DEFAULT_BACKEND = "complex"
DEFAULT_FORMAT = "json"
DEFAULT_LOG_LEVEL = "INFO"


def parse_precision(raw) -> int:
    try:
        bits = int(str(raw).strip())
    except ValueError:
        raise InvalidParameterError(f"precision must be an integer number of bits, got {raw!r}")
    return validate_precision(bits)


def parse_backend(raw: str) -> str:
    value = (raw or "").strip().lower()
    if value not in BACKENDS:
        raise InvalidParameterError(f"backend must be one of {list(BACKENDS)}, got {raw!r}")
    return value


def parse_format(raw: str) -> str:
    value = (raw or "").strip().lower()
    if value not in FORMATS:
        raise InvalidParameterError(f"format must be one of {list(FORMATS)}, got {raw!r}")
    return value


def parse_log_level(raw: str) -> str:
    value = (raw or "").strip().upper()
    if value not in LOG_LEVELS:
        raise InvalidParameterError(f"log level must be one of {list(LOG_LEVELS)}, got {raw!r}")
    return value


def read_config_file(path: Optional[str]) -> Dict[str, str]:
    """Key-value pairs from a dotenv-style file; unknown keys are rejected."""
    if not path:
        return {}
    if not os.path.isfile(path):
        raise InvalidParameterError(f"config file not found: {path}")
    values = {k.strip().lower(): v for k, v in dotenv_values(path).items() if v is not None}
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise InvalidParameterError(f"unknown config keys {unknown}; allowed keys are {list(CONFIG_KEYS)}")
    logger.info(f"[CONFIG] Loaded {sorted(values)} from {path}")
    return values


@dataclass(frozen=True)
class Settings:
    precision_bits: int = DEFAULT_PRECISION_BITS
    backend: str = DEFAULT_BACKEND
    output_format: str = DEFAULT_FORMAT
    out: Optional[str] = None
    log_level: str = DEFAULT_LOG_LEVEL


def _first(*candidates):
    return next((c for c in candidates if c is not None and c != ""), None)


def resolve_settings(
    prec=None,
    backend: Optional[str] = None,
    output_format: Optional[str] = None,
    out: Optional[str] = None,
    log_level: Optional[str] = None,
    config_path: Optional[str] = None,
) -> Settings:
    """
    Merge flags, config file and environment into Settings.

    Raises:
        InvalidParameterError: If any resolved value is invalid
    """
    file_values = read_config_file(config_path)
    settings = Settings(
        precision_bits=parse_precision(
            _first(prec, file_values.get("prec"), os.getenv("QLF_PRECISION_BITS"), DEFAULT_PRECISION_BITS)
        ),
        backend=parse_backend(_first(backend, file_values.get("backend"), os.getenv("QLF_BACKEND"), DEFAULT_BACKEND)),
        output_format=parse_format(_first(output_format, file_values.get("format"), DEFAULT_FORMAT)),
        out=_first(out, file_values.get("out")),
        log_level=parse_log_level(_first(log_level, os.getenv("QLF_LOG_LEVEL"), DEFAULT_LOG_LEVEL)),
    )
    logger.debug(f"[CONFIG] Resolved settings: {settings}")
    return settings
