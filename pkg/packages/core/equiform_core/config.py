# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Basic config services: load numerics, sampling, search and scan settings from
config.yaml in the config directory.
WARNING: This code is under development and may undergo changes in future releases.
Backwards compatibility is not guaranteed at this time.
"""

import os
import logging
from dataclasses import dataclass
from typing import Any, Optional

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

VALID_MODES = ("development", "production", "testing")
VALID_METHODS = ("auto", "symbolic", "spectral")


class ConfigurationError(RuntimeError):
    """Raised when configuration is missing or invalid."""
    pass


@dataclass
class LoggingConfig:
    level: str = "info"
    file: Optional[str] = None
    format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass
class NumericsConfig:
    tolerance: float = 1e-9           # float-mode zero test, relative to a scale hint
    pole_tolerance: float = 1e-12     # |Q| below this (relative) is a chart pole
    fd_step: float = 1e-4
    grid_size: int = 48               # spectral grid points per angle
    method: str = "auto"              # auto, symbolic or spectral


@dataclass
class SamplingConfig:
    numerator_bound: int = 9
    denominator_bound: int = 9
    float_bound: float = 3.0


@dataclass
class SearchConfig:
    restarts: int = 20
    max_iterations: int = 400
    target: float = 1e-10
    optimizer: str = "BFGS"


@dataclass
class ScanConfig:
    threads: Optional[int] = None
    histogram_bins: int = 20
    extremes_kept: int = 3



class AppConfig:
    config_paths = ["config.yaml"]

    def __init__(self):
        load_dotenv()
        # Set config directory - can be overridden by EQUIFORM_CONFIG_DIR environment variable
        self.config_directory = self._get_config_directory()

        # Defaults in case no config is found
        self.mode = "production"
        self.logging = LoggingConfig()
        self.numerics = NumericsConfig()
        self.sampling = SamplingConfig()
        self.search = SearchConfig()
        self.scan = ScanConfig(threads=self._get_thread_cap("EQUIFORM_THREADS"))

        config_path = os.path.join(self.config_directory, 'config.yaml')
        if os.path.exists(config_path):
            self._load_unified_config(config_path)

    def _load_unified_config(self, config_path: str):
        """
        Load configuration from a single config.yaml file.

        Expected format:
        mode: production
        logging:
          level: info
        numerics:
          tolerance: 1.0e-9
          method: auto
        search:
          restarts: 20
        scan:
          threads: EQUIFORM_THREADS
        """
        with open(config_path, "r") as f:
            config = yaml.safe_load(f) or {}

        self.mode = str(config.get('mode', self.mode)).lower()
        if self.mode not in VALID_MODES:
            raise ConfigurationError(f"Invalid mode {self.mode!r} in {config_path}")

        log_cfg = config.get('logging', {}) or {}
        log_file = self._get_config_value(log_cfg.get('file'))
        self.logging = LoggingConfig(
            level=str(log_cfg.get('level', "info")),
            file=self._resolve_path(log_file) if log_file else None,
            format=log_cfg.get('format', LoggingConfig.format),
        )

        num_cfg = config.get('numerics', {}) or {}
        self.numerics = NumericsConfig(
            tolerance=float(num_cfg.get('tolerance', 1e-9)),
            pole_tolerance=float(num_cfg.get('pole_tolerance', 1e-12)),
            fd_step=float(num_cfg.get('fd_step', 1e-4)),
            grid_size=int(num_cfg.get('grid_size', 48)),
            method=self._get_config_value(num_cfg.get('method'), "auto"),
        )
        if self.numerics.method not in VALID_METHODS:
            raise ConfigurationError(
                f"Invalid numerics.method {self.numerics.method!r}; expected one of {VALID_METHODS}")

        smp_cfg = config.get('sampling', {}) or {}
        self.sampling = SamplingConfig(
            numerator_bound=int(smp_cfg.get('numerator_bound', 9)),
            denominator_bound=int(smp_cfg.get('denominator_bound', 9)),
            float_bound=float(smp_cfg.get('float_bound', 3.0)),
        )

        search_cfg = config.get('search', {}) or {}
        self.search = SearchConfig(
            restarts=int(search_cfg.get('restarts', 20)),
            max_iterations=int(search_cfg.get('max_iterations', 400)),
            target=float(search_cfg.get('target', 1e-10)),
            optimizer=search_cfg.get('optimizer', "BFGS"),
        )

        scan_cfg = config.get('scan', {}) or {}
        threads = scan_cfg.get('threads')
        if isinstance(threads, str):
            threads = self._get_thread_cap(threads)
        self.scan = ScanConfig(
            threads=int(threads) if threads else None,
            histogram_bins=int(scan_cfg.get('histogram_bins', 20)),
            extremes_kept=int(scan_cfg.get('extremes_kept', 3)),
        )

    def _get_config_directory(self) -> str:
        """
        Get the configuration directory from environment variable or use default.
        Default is the config folder at the same level as config.py.
        """
        config_dir = os.getenv('EQUIFORM_CONFIG_DIR')
        if config_dir:
            config_dir = os.path.expanduser(os.path.expandvars(config_dir))
            if not os.path.exists(config_dir):
                logger.warning("Configured config directory %s does not exist. Using default.", config_dir)
                config_dir = None

        if not config_dir:
            current_dir = os.path.dirname(os.path.abspath(__file__))  # equiform_core directory
            config_dir = os.path.join(current_dir, 'config')

        return os.path.abspath(config_dir)

    def _resolve_path(self, path: str) -> str:
        """
        Resolves a path. Absolute paths are returned unchanged; relative paths
        are resolved against the config directory.
        """
        if os.path.isabs(path):
            return path
        return os.path.abspath(os.path.join(self.config_directory, path))

    def _get_config_value(self, value: Any, default: Any = None) -> Any:
        """
        Get configuration value. Strings ending in _ENV or written in upper case
        are environment variable names; anything else is returned as-is.
        """
        if value is None:
            return default

        if isinstance(value, str):
            if value.endswith('_ENV') or value.isupper():
                return os.getenv(value, default)
            return value

        return value

    def _get_thread_cap(self, env_name: str) -> Optional[int]:
        raw = os.getenv(env_name)
        if not raw:
            return None
        try:
            threads = int(raw)
        except ValueError:
            logger.warning("Ignoring non-integer %s=%r", env_name, raw)
            return None
        return threads if threads > 0 else None

    def worker_count(self) -> int:
        """Threads used by scans: the configured cap, else the CPU count."""
        return self.scan.threads or os.cpu_count() or 1

    def is_production_mode(self) -> bool:
        """Returns True if the system is running in production mode."""
        return getattr(self, 'mode', 'production').lower() == 'production'

    def is_development_mode(self) -> bool:
        """Returns True if the system is running in development mode."""
        return getattr(self, 'mode', 'production').lower() == 'development'

    def is_testing_mode(self) -> bool:
        """Returns True if the system is running in testing mode."""
        return getattr(self, 'mode', 'production').lower() == 'testing'

    def should_raise_exceptions(self) -> bool:
        """Returns True if exceptions should be raised instead of caught (for testing and development)."""
        return self.is_testing_mode() or self.is_development_mode()

    def set_mode(self, mode: str):
        """Set the application mode (development, production, or testing)."""
        if mode.lower() not in VALID_MODES:
            raise ValueError(f"Invalid mode: {mode}. Must be 'development', 'production', or 'testing'")
        self.mode = mode.lower()


# Global singleton
CONFIG = AppConfig()
