"""Configuration management for logderiv"""

import logging
import os
import re
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, field_validator

DEFAULT_CONFIG_PATH = Path("config/logderiv.yaml")
GRID_CAP_ENV = "LOGDERIV_GRID_CAP"
ENV_REFERENCE = re.compile(r"\$\{([^}]+)\}")


class ComputationSettings(BaseModel):
    """Exact computation settings"""

    grid_cap: int = Field(
        default=10,
        ge=1,
        le=16,
        description="Largest subspace dimension decided on the {0,1,2,3} grid",
    )
    default_dmax: int = Field(
        default=6, ge=0, le=12, description="Filtration degree bound for analyze"
    )
    df_search_limit: int = Field(
        default=8, ge=1, le=12, description="Degree bound for the d_f search"
    )
    fallback_above_cap: bool = Field(
        default=True,
        description="Decide spaces above the grid cap on the degree-3 lattice",
    )


class ReproduceSettings(BaseModel):
    """Reproduction suite settings"""

    z2_search_limit: int = Field(
        default=8, ge=6, le=12, description="Degree bound for the perturbed Ziegler d_f"
    )
    time_budget_seconds: float = Field(
        default=60.0, gt=0, description="Soft wall-clock budget; exceeded runs log a warning"
    )


class LoggingSettings(BaseModel):
    """Logging configuration"""

    level: str = Field(default="WARNING")
    file: Optional[str] = Field(default=None)

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        allowed = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if v.upper() not in allowed:
            raise ValueError(f"level must be one of {sorted(allowed)}")
        return v.upper()


class LogderivConfig(BaseModel):
    """Main configuration model"""

    computation: ComputationSettings = Field(default_factory=ComputationSettings)
    reproduce: ReproduceSettings = Field(default_factory=ReproduceSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


class ConfigLoader:
    """Configuration loader with environment variable substitution"""

    def __init__(self, config_path: Optional[Path] = None):
        self.config_path = config_path or DEFAULT_CONFIG_PATH
        self._config: Optional[LogderivConfig] = None

    def _substitute_env_vars(self, data: Any, key: str = "") -> Any:
        """Expand ``${VAR}`` in values such as ``logging.file`` or ``computation.grid_cap``

        Unset variables stay verbatim and the dotted key holding them is logged, so
        a numeric key left as ``${VAR}`` fails validation under a traceable name.
        """
        if isinstance(data, dict):
            return {
                name: self._substitute_env_vars(value, f"{key}.{name}" if key else name)
                for name, value in data.items()
            }
        if isinstance(data, list):
            return [
                self._substitute_env_vars(item, f"{key}[{i}]") for i, item in enumerate(data)
            ]
        if not isinstance(data, str):
            return data

        def expand(match: "re.Match[str]") -> str:
            value = os.getenv(match.group(1))
            if value is None:
                logging.warning(
                    f"Config key {key} refers to unset variable {match.group(0)}; kept as is"
                )
                return match.group(0)
            return value

        return ENV_REFERENCE.sub(expand, data)

    def _apply_overrides(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """LOGDERIV_GRID_CAP takes precedence over the file"""
        grid_cap = os.getenv(GRID_CAP_ENV)
        if grid_cap is None:
            return data
        try:
            value = int(grid_cap)
        except ValueError:
            raise ValueError(f"{GRID_CAP_ENV} must be an integer, got {grid_cap!r}")
        computation = dict(data.get("computation") or {})
        computation["grid_cap"] = value
        return {**data, "computation": computation}

    def load_config(self) -> LogderivConfig:
        """Load and validate configuration from YAML file"""
        if not self.config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {self.config_path}")

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                raw_config = yaml.safe_load(f) or {}

            processed_config = self._apply_overrides(self._substitute_env_vars(raw_config))
            self._config = LogderivConfig(**processed_config)
            return self._config

        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML configuration: {e}")
        except Exception as e:
            raise ValueError(f"Configuration validation failed: {e}")

    def load_or_default(self) -> LogderivConfig:
        """Load the file when present, otherwise defaults plus environment overrides"""
        if self.config_path.exists():
            return self.load_config()
        logging.debug(f"No configuration at {self.config_path}; using defaults")
        try:
            self._config = LogderivConfig(**self._apply_overrides({}))
        except Exception as e:
            raise ValueError(f"Configuration validation failed: {e}")
        return self._config

    @property
    def config(self) -> Optional[LogderivConfig]:
        """Get current configuration"""
        return self._config
