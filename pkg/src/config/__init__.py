"""Configuration management."""

from .schema import SweepConfig, GridSpec, Fig12Config, Fig3Config, TransitionConfig, VerifyConfig
from .settings import Config, ConfigError, load_config, get_default_config, resolve_threads

__all__ = [
    'SweepConfig',
    'GridSpec',
    'Fig12Config',
    'Fig3Config',
    'TransitionConfig',
    'VerifyConfig',
    'Config',
    'ConfigError',
    'load_config',
    'get_default_config',
    'resolve_threads',
]
