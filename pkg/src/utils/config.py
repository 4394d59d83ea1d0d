"""Configuration parameters and manager."""

import os
from fractions import Fraction
from typing import Dict, Any, Optional

import yaml

from . import logger

# Main configuration directory
CONFIG_DIR = os.path.expanduser("~/.config/nonnormal")

# Classifier defaults (finite-depth reading of the frequency definitions)
DEFAULT_DELTA = Fraction(1, 20)
DEFAULT_EPSILON = Fraction(1, 50)
DEFAULT_CHECKPOINT_START = 64
DEFAULT_CHECKPOINT_RATIO = 2
DEFAULT_DEPTH = 2 ** 16

# Monte Carlo defaults
DEFAULT_SEED = 0
DEFAULT_SAMPLES = 1000
DEFAULT_WORKERS = 1

# Output
SUPPORTED_FORMATS = ['json', 'csv', 'text']
DEFAULT_FORMAT = 'text'

# Guard for prefix-tree enumeration
MAX_ENUMERATION = 10 ** 6

# Default configuration values
DEFAULT_CONFIG = {
    'delta': DEFAULT_DELTA,
    'epsilon': DEFAULT_EPSILON,
    'checkpoint_start': DEFAULT_CHECKPOINT_START,
    'checkpoint_ratio': DEFAULT_CHECKPOINT_RATIO,
    'depth': DEFAULT_DEPTH,
    'seed': DEFAULT_SEED,
    'samples': DEFAULT_SAMPLES,
    'workers': DEFAULT_WORKERS,
    'format': DEFAULT_FORMAT,
}


def parse_rational(value: Any) -> Fraction:
    """Parse "1/20", 0.05 or 1 into a Fraction (floats are read via their decimal text)."""
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


class ConfigManager:
    """Manages YAML configuration file loading and default values."""

    def __init__(self, config_dir: str = CONFIG_DIR):
        """Initialize config manager.

        Args:
            config_dir: Configuration directory path
        """
        self.config_dir = config_dir
        self.config_path = os.path.join(config_dir, 'config.yaml')
        self._config_cache: Optional[Dict[str, Any]] = None

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file or return defaults.

        Returns:
            Dict[str, Any]: Configuration dictionary with defaults applied
        """
        if self._config_cache is not None:
            return self._config_cache

        config = DEFAULT_CONFIG.copy()

        if os.path.exists(self.config_path):
            try:
                with open(self.config_path, 'r') as f:
                    user_config = yaml.safe_load(f) or {}

                # Update only defined settings, keep defaults for others
                for key, value in user_config.items():
                    if key in DEFAULT_CONFIG:
                        config[key] = value
                    else:
                        logger.warn(f"Unknown setting '{key}' in {self.config_path}, ignored")

                logger.debug(f"Configuration loaded from {self.config_path}")

            except Exception as e:
                logger.error(f"Error loading config file {self.config_path}: {e}")
                logger.info("Using default configuration")
        else:
            logger.debug("No config.yaml found, using default configuration")

        self._config_cache = config
        return config

    def _get_rational(self, key: str, default: Fraction) -> Fraction:
        value = self.load_config().get(key, default)
        try:
            parsed = parse_rational(value)
        except (ValueError, ZeroDivisionError, TypeError):
            logger.warn(f"Invalid value for '{key}': {value!r}, using {default}")
            return default
        if parsed <= 0:
            logger.warn(f"'{key}' must be positive, using {default}")
            return default
        return parsed

    def _get_int(self, key: str, default: int, minimum: int) -> int:
        value = self.load_config().get(key, default)
        try:
            return max(minimum, int(value))
        except (ValueError, TypeError):
            logger.warn(f"Invalid value for '{key}': {value!r}, using {default}")
            return default

    def get_delta(self) -> Fraction:
        """Get oscillation threshold (positive rational)."""
        return self._get_rational('delta', DEFAULT_DELTA)

    def get_epsilon(self) -> Fraction:
        """Get target tolerance around 1/s (positive rational)."""
        return self._get_rational('epsilon', DEFAULT_EPSILON)

    def get_checkpoint_start(self) -> int:
        return self._get_int('checkpoint_start', DEFAULT_CHECKPOINT_START, 1)

    def get_checkpoint_ratio(self) -> int:
        return self._get_int('checkpoint_ratio', DEFAULT_CHECKPOINT_RATIO, 2)

    def get_depth(self) -> int:
        return self._get_int('depth', DEFAULT_DEPTH, 1)

    def get_seed(self) -> int:
        return self._get_int('seed', DEFAULT_SEED, 0)

    def get_samples(self) -> int:
        return self._get_int('samples', DEFAULT_SAMPLES, 1)

    def get_workers(self) -> int:
        return self._get_int('workers', DEFAULT_WORKERS, 1)

    def get_format(self) -> str:
        """Get output format, falling back to the default for unknown names."""
        fmt = str(self.load_config().get('format', DEFAULT_FORMAT))
        if fmt not in SUPPORTED_FORMATS:
            logger.warn(f"Unsupported format '{fmt}', using {DEFAULT_FORMAT}")
            return DEFAULT_FORMAT
        return fmt

    def reload_config(self):
        """Drop the cached configuration so the next getter reads the file again."""
        self._config_cache = None


# Global ConfigManager instance - module-level singleton
_config: Optional[ConfigManager] = None
_config_dir: Optional[str] = None


def get_config(config_dir: str = None) -> ConfigManager:
    """Get global config instance, creating it if necessary.

    Args:
        config_dir: Configuration directory path. If None, uses default CONFIG_DIR.
                   Only used when creating the instance for the first time.

    Returns:
        ConfigManager: Global ConfigManager instance
    """
    global _config, _config_dir

    # If config doesn't exist yet, create it
    if _config is None:
        if config_dir is None:
            config_dir = CONFIG_DIR
        _config_dir = config_dir
        _config = ConfigManager(config_dir)
    # If config exists but different config_dir requested, recreate
    elif config_dir is not None and config_dir != _config_dir:
        _config_dir = config_dir
        _config = ConfigManager(config_dir)

    return _config


def reset_config():
    """Reset global config instance. Used for testing."""
    global _config, _config_dir
    _config = None
    _config_dir = None
