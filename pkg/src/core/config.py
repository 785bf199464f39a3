"""
Configuration management for linfdiff
"""

import json
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..utils.exceptions import ConfigurationException

SUITES = ("shuffles", "doldkan", "em", "psi", "dstar", "main", "exactness", "all")
THREADS_ENV = "LINFDIFF_THREADS"


@dataclass
class WindowConfig:
    """Truncation window: word length K and simplicial level N"""
    max_word: int = 3
    max_level: int = 4


@dataclass
class VerifyConfig:
    """Verification suite settings"""
    suite: str = "all"
    catalog: Optional[str] = None
    seed: int = 7
    max_n: int = 6
    random_trials: int = 10


@dataclass
class OutputConfig:
    """Output configuration settings"""
    output_dir: str = "output"
    indent: int = 2
    include_timestamp: bool = False


@dataclass
class AppConfig:
    """Main application configuration"""
    window: WindowConfig = field(default_factory=WindowConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    log_level: str = "INFO"
    log_file: Optional[str] = None
    threads: int = 1


class RunConfig(BaseModel):
    """Validated settings of a single invocation"""
    model_config = ConfigDict(extra="forbid")

    max_word: int = Field(default=3, ge=1)
    max_level: int = Field(default=4, ge=1)
    input: Optional[str] = None
    output: Optional[str] = None
    suite: str = "all"
    catalog: Optional[str] = None
    seed: int = 7
    max_n: int = Field(default=6, ge=0)
    random_trials: int = Field(default=10, ge=1)
    threads: int = Field(default=1, ge=1)

    @field_validator("suite")
    @classmethod
    def known_suite(cls, value: str) -> str:
        if value not in SUITES:
            raise ValueError(f"unknown suite {value!r}; expected one of {', '.join(SUITES)}")
        return value

    @classmethod
    def from_app_config(cls, config: AppConfig, **overrides) -> "RunConfig":
        """Merge file configuration, LINFDIFF_THREADS and command-line overrides"""
        values: Dict[str, Any] = {
            "max_word": config.window.max_word,
            "max_level": config.window.max_level,
            "suite": config.verify.suite,
            "catalog": config.verify.catalog,
            "seed": config.verify.seed,
            "max_n": config.verify.max_n,
            "random_trials": config.verify.random_trials,
            "threads": config.threads,
        }
        env_threads = os.environ.get(THREADS_ENV)
        if env_threads:
            try:
                values["threads"] = int(env_threads)
            except ValueError:
                raise ConfigurationException(f"{THREADS_ENV} must be an integer, got {env_threads!r}")
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            first = e.errors()[0]
            path = ".".join(str(part) for part in first["loc"])
            raise ConfigurationException(f"Invalid configuration at {path}: {first['msg']}")


class ConfigManager:
    """Manages configuration loading and saving"""

    def __init__(self, config_file: str = "config.json"):
        self.config_file = config_file
        self.config = self._load_config()

    def _load_config(self) -> AppConfig:
        """Load configuration from file or fall back to defaults"""
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, "r") as f:
                    data = json.load(f)
                return self._dict_to_config(data)
            except (OSError, ValueError, TypeError) as e:
                raise ConfigurationException(f"Could not load config file {self.config_file}: {e}")
        return self._create_default_config()

    def _create_default_config(self) -> AppConfig:
        return AppConfig()

    def _dict_to_config(self, data: Dict[str, Any]) -> AppConfig:
        """Convert dictionary to configuration object"""
        return AppConfig(
            window=WindowConfig(**data.get("window", {})),
            verify=VerifyConfig(**data.get("verify", {})),
            output=OutputConfig(**data.get("output", {})),
            log_level=data.get("log_level", "INFO"),
            log_file=data.get("log_file"),
            threads=data.get("threads", 1),
        )

    def save_config(self) -> None:
        """Save current configuration to file"""
        try:
            with open(self.config_file, "w") as f:
                json.dump(asdict(self.config), f, indent=2)
        except OSError as e:
            raise ConfigurationException(f"Could not save config file {self.config_file}: {e}")

    def get_config(self) -> AppConfig:
        return self.config

    def update_config(self, **kwargs) -> None:
        """Update top-level configuration values"""
        for key, value in kwargs.items():
            if not hasattr(self.config, key):
                raise ConfigurationException(f"Unknown configuration key: {key}")
            setattr(self.config, key, value)

    def create_default_config_file(self) -> None:
        self.config = self._create_default_config()
        self.save_config()


# Global configuration instance
config_manager = ConfigManager()
