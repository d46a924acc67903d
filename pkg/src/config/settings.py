"""Experiment configuration loading and validation."""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv
from pydantic import ValidationError

from ..errors import DecoherenceError
from .schema import SweepConfig

logger = logging.getLogger(__name__)


# Base paths
BASE_DIR = Path(__file__).parent.parent.parent
CONFIG_DIR = BASE_DIR / "config"
DEFAULT_CONFIG = CONFIG_DIR / "decoherence.yaml"

THREADS_ENV = "DECOTM_THREADS"


class ConfigError(DecoherenceError):
    """Raised when a config file cannot be read or fails validation."""
    pass


class Config:
    """Parsed YAML mapping plus the source text used to locate errors."""

    def __init__(self, data: dict[str, Any] | None = None, source: str | None = None, text: str | None = None):
        self._data = data or {}
        self.source = source
        self._text = text

    def validate(self) -> SweepConfig:
        """
        Check the mapping against the schema.

        Raises:
            ConfigError: One line per problem, as 'path (line N): message'
        """
        try:
            return SweepConfig.model_validate(self._data)
        except ValidationError as e:
            lines = []
            for err in e.errors():
                path = ".".join(str(part) for part in err["loc"]) or "<root>"
                line = _line_of(self._text, err["loc"])
                where = f" (line {line})" if line is not None else ""
                lines.append(f"{path}{where}: {err['msg']}")
            origin = self.source or "config"
            raise ConfigError(f"{origin} is invalid:\n  " + "\n  ".join(lines)) from e


def _line_of(text: str | None, loc: tuple) -> int | None:
    """1-based line of the deepest YAML node along loc."""
    if not text:
        return None
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return None
    if node is None:
        return None

    line = node.start_mark.line + 1
    for part in loc:
        if isinstance(node, yaml.MappingNode):
            match = next((v for k, v in node.value if k.value == str(part)), None)
            if match is None:
                break
            node = match
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int) and part < len(node.value):
            node = node.value[part]
        else:
            break
        line = node.start_mark.line + 1
    return line


def load_config(config_path: Path | None = None) -> Config:
    """
    Load configuration from a YAML file.

    A missing default file falls back to get_default_config(); a missing
    explicit path is an error.
    """
    load_dotenv()

    if config_path is None:
        config_path = DEFAULT_CONFIG
        if not config_path.exists():
            logger.info(f"No config at {config_path}, using defaults")
            return Config(get_default_config(), source="defaults")

    config_path = Path(config_path)
    if not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}")

    text = config_path.read_text()
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" (line {mark.line + 1})" if mark is not None else ""
        raise ConfigError(f"{config_path}{where}: not valid YAML") from e

    if not isinstance(data, dict):
        raise ConfigError(f"{config_path} (line 1): top level must be a mapping")

    logger.debug(f"Loaded config from {config_path}")
    return Config(data, source=str(config_path), text=text)


def resolve_threads(cli_value: int | None, config_value: int | None) -> int:
    """
    Worker count: --threads, then DECOTM_THREADS, then the config file; 0 means auto.

    Raises:
        ConfigError: If the environment variable is not a non-negative integer
    """
    if cli_value is not None:
        return cli_value

    env_value = os.environ.get(THREADS_ENV)
    if env_value:
        try:
            threads = int(env_value)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env_value!r}")
        if threads < 0:
            raise ConfigError(f"{THREADS_ENV} must be non-negative, got {threads}")
        return threads

    return config_value if config_value is not None else 0


def get_default_config() -> dict[str, Any]:
    """Return default configuration."""
    return SweepConfig().model_dump(mode="json", exclude_none=True)
