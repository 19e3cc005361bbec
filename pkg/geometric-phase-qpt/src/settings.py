"""
Runtime settings: .env defaults, TOML configuration files and logging setup
"""

import logging
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from errors import ConfigError

THREADS_ENV = "QPT_GEOM_THREADS"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Global variables
OUTPUT_DIR = Path(__file__).parent.parent / 'output'


def default_threads() -> int:
    """Worker count from QPT_GEOM_THREADS (.env or process environment), else 1"""
    load_dotenv()

    raw = os.getenv(THREADS_ENV)
    if raw is None or not raw.strip():
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got '{raw}'")
    if threads < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got '{raw}'")
    return threads


def load_config_file(path: Optional[Path]) -> Dict[str, Any]:
    """Read a TOML configuration; keys are long flag names with '-' turned into '_'"""
    if path is None:
        return {}
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        with path.open("rb") as handle:
            data = tomllib.load(handle)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Invalid TOML in {path}: {e}")
    return {key.replace("-", "_"): value for key, value in data.items()}


def merge_settings(defaults: Dict[str, Any], file_values: Dict[str, Any],
                   flag_values: Dict[str, Any]) -> Dict[str, Any]:
    """Layer defaults < config file < flags; flags left as None do not override"""
    merged = dict(defaults)
    merged.update(file_values)
    merged.update({key: value for key, value in flag_values.items() if value is not None})
    return merged


def configure_logging(verbose: bool = False) -> None:
    """Send package logs to stderr; DEBUG when verbose"""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
