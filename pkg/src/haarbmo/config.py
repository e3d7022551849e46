"""
Run configuration: built-in defaults, then haarbmo.toml, then command-line flags.
"""
import logging
import os
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional

import toml

from haarbmo.exceptions import FormatError, ParameterError

logger = logging.getLogger(__name__)

CONFIG_FILENAME = "haarbmo.toml"
CONFIG_SECTION = "run"
FORMATS = ("json", "table")

# Keys accepted in the [run] section, mapped to RunConfig fields.
FILE_KEYS = {
    "depth": "depth",
    "A": "threshold",
    "K": "grid",
    "seed": "seed",
    "budget": "budget",
    "mode": "mode",
    "format": "output_format",
}


@dataclass
class RunConfig:
    """Everything a subcommand needs to run."""
    command: Optional[str] = None
    depth: Optional[int] = None
    threshold: Optional[Fraction] = None
    grid: int = 1
    seed: int = 0
    budget: int = 4
    mode: Optional[str] = None
    output_format: str = "json"
    input: Optional[str] = None
    tau: Optional[str] = None
    certificate: Optional[str] = None
    family: Optional[str] = None
    out: Optional[str] = None
    trace: Optional[str] = None

    def validate(self) -> None:
        if self.output_format not in FORMATS:
            raise ParameterError(f"unknown format {self.output_format!r}; expected one of {FORMATS}")
        for name in ("depth", "grid", "seed", "budget"):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, int) or isinstance(value, bool)):
                raise ParameterError(f"{name} must be an integer, got {value!r}")
        if self.depth is not None and self.depth < 0:
            raise ParameterError(f"depth must be non-negative, got {self.depth}")
        if self.grid < 1:
            raise ParameterError(f"K must be a positive integer, got {self.grid}")
        if self.budget < 1:
            raise ParameterError(f"budget must be positive, got {self.budget}")

    def merged(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """A copy with every non-None override applied."""
        names = {f.name for f in fields(self)}
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        for key, value in overrides.items():
            if key in names and value is not None:
                values[key] = value
        return RunConfig(**values)


def _threshold(value: Any, path: str) -> Fraction:
    if isinstance(value, bool):
        raise FormatError(f"A in {path} must be a number or a \"p/q\" string, got {value!r}")
    try:
        return Fraction(str(value))
    except ValueError:
        raise FormatError(f"A in {path} must be a number or a \"p/q\" string, got {value!r}") from None


def load_file_settings(path: Optional[str] = None) -> Dict[str, Any]:
    """
    Read the [run] section of a configuration file.

    Args:
        path: Explicit file; when None, haarbmo.toml in the working directory
            is used if it exists.

    Returns:
        RunConfig field names mapped to values.
    """
    if path is None:
        path = CONFIG_FILENAME
        if not os.path.exists(path):
            return {}
    try:
        document = toml.load(path)
    except toml.TomlDecodeError as e:
        raise FormatError(f"malformed configuration file {path}: {e.msg}", e.lineno, e.colno) from None

    section = document.get(CONFIG_SECTION, {})
    if not isinstance(section, dict):
        raise FormatError(f"[{CONFIG_SECTION}] in {path} must be a table")
    settings: Dict[str, Any] = {}
    for key, value in section.items():
        if key not in FILE_KEYS:
            logger.warning("ignoring unknown configuration key %r in %s", key, path)
            continue
        settings[FILE_KEYS[key]] = _threshold(value, path) if key == "A" else value
    logger.debug("loaded %d settings from %s", len(settings), path)
    return settings


def build_config(cli_values: Mapping[str, Any], config_path: Optional[str] = None) -> RunConfig:
    config = RunConfig().merged(load_file_settings(config_path)).merged(cli_values)
    config.validate()
    return config
