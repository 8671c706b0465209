"""
Configuration system for numerical and experiment settings
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, field_validator

from .errors import ConfigurationError

logger = logging.getLogger(__name__)

# Fixed so that `figures` with no flags reproduces the same curves everywhere
DEFAULT_SEED = 20070405


class QuadratureConfig(BaseModel):
    """Gauss-Laguerre settings for the e^{-x}-weighted integrals"""
    model_config = {"frozen": True}

    node_count: int = Field(default=64, description="Gauss-Laguerre nodes")
    abs_tol: float = Field(default=1e-11, description="Target absolute error")

    @field_validator("node_count")
    @classmethod
    def _check_nodes(cls, value: int) -> int:
        if value < 2:
            raise ValueError("node_count must be >= 2")
        return value

    @field_validator("abs_tol")
    @classmethod
    def _check_tol(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("abs_tol must be > 0")
        return value


class ExperimentDefaults(BaseModel):
    """Defaults for the replicated MSE study"""
    n: int = 500
    replications: int = 200
    k_min: int = 2
    k_max: int = 150
    seed: int = DEFAULT_SEED
    workers: int = 1
    variants: List[str] = Field(default_factory=lambda: ["V1", "V2", "V3"])


class FigureDefaults(BaseModel):
    """Defaults for figure emission"""
    emit_svg: bool = False
    log_y: bool = False


class ToolSettings(BaseModel):
    """All settings, as loaded from YAML and the environment"""
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    experiment: ExperimentDefaults = Field(default_factory=ExperimentDefaults)
    figures: FigureDefaults = Field(default_factory=FigureDefaults)


class ConfigLoader:
    """Utility class for loading configuration from files"""

    @staticmethod
    def load_from_file(config_path: Path) -> ToolSettings:
        """Load settings from a YAML file; a missing file gives the defaults"""
        if not config_path.exists():
            logger.debug(f"No configuration at {config_path}, using defaults")
            return ToolSettings()

        try:
            with open(config_path, 'r') as f:
                data = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ConfigurationError(
                f"Failed to read configuration: {e}", config_path=str(config_path), cause=e
            )

        if not data:
            return ToolSettings()

        try:
            return ToolSettings(**data)
        except PydanticValidationError as e:
            raise ConfigurationError(
                f"Invalid configuration: {e.error_count()} error(s)",
                config_path=str(config_path),
                details={"errors": [err["msg"] for err in e.errors()]},
                cause=e
            )

    @staticmethod
    def get_default_config_path() -> Path:
        """Get default configuration file path"""
        if config_path := os.getenv("WTC_CONFIG_PATH"):
            return Path(config_path)

        project_root = Path(__file__).parent.parent.parent
        return project_root / "config" / "defaults.yaml"

    @staticmethod
    def load_default_config(config_path: Optional[Path] = None) -> ToolSettings:
        """Load configuration from the given or default location, then apply env overrides"""
        settings = ConfigLoader.load_from_file(config_path or ConfigLoader.get_default_config_path())
        return apply_env_overrides(settings, get_env_config())


def get_env_config() -> Dict[str, Any]:
    """Get configuration overrides from environment variables"""
    env_config: Dict[str, Any] = {}

    for variable, section, key in (
        ("WTC_SEED", "experiment", "seed"),
        ("WTC_WORKERS", "experiment", "workers"),
        ("WTC_NODE_COUNT", "quadrature", "node_count"),
    ):
        if raw := os.getenv(variable):
            try:
                env_config.setdefault(section, {})[key] = int(raw)
            except ValueError as e:
                raise ConfigurationError(
                    f"{variable} must be an integer, got {raw!r}", details={"variable": variable}, cause=e
                )

    return env_config


def apply_env_overrides(settings: ToolSettings, overrides: Dict[str, Any]) -> ToolSettings:
    """Merge section-level overrides into a copy of the settings"""
    if not overrides:
        return settings

    data = settings.model_dump()
    for section, values in overrides.items():
        data.setdefault(section, {}).update(values)

    try:
        return ToolSettings(**data)
    except PydanticValidationError as e:
        raise ConfigurationError(f"Invalid environment override: {e.errors()[0]['msg']}", cause=e)
