"""
Configuration for the qubit channel roof toolkit.
Handles environment-specific settings for numerics, search budgets and logging.
"""
import os
import logging
from typing import Optional
from dataclasses import dataclass
from dotenv import load_dotenv

from exceptions import ConfigError

# Load environment variables
load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


@dataclass
class Config:
    """Application configuration with environment variable support."""

    # Environment
    ENVIRONMENT: str = os.getenv("ENVIRONMENT", "development")
    DEBUG: bool = _env_bool("DEBUG", "False")

    # Randomness
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "42"))

    # Oracle search budget
    ORACLE_GRID: int = int(os.getenv("ORACLE_GRID", "64"))
    ORACLE_RESTARTS: int = int(os.getenv("ORACLE_RESTARTS", "16"))
    ORACLE_REFINE_ITERS: int = int(os.getenv("ORACLE_REFINE_ITERS", "200"))
    ORACLE_TOL: float = float(os.getenv("ORACLE_TOL", "1e-12"))

    # Capacity search
    CAPACITY_STARTS: int = int(os.getenv("CAPACITY_STARTS", "32"))
    DEGENERATE_GRID_POINTS: int = int(os.getenv("DEGENERATE_GRID_POINTS", "4096"))

    # Numerical tolerances
    CPTP_TOL: float = float(os.getenv("CPTP_TOL", "1e-10"))
    SPAN_RANK_TOL: float = float(os.getenv("SPAN_RANK_TOL", "1e-10"))
    STATE_TOL: float = float(os.getenv("STATE_TOL", "1e-12"))
    COMPARE_TOL: float = float(os.getenv("COMPARE_TOL", "1e-4"))
    BEAT_TOL: float = float(os.getenv("BEAT_TOL", "1e-9"))

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")
    LOG_FORMAT: str = os.getenv(
        "LOG_FORMAT",
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    LOG_JSON: bool = _env_bool("LOG_JSON", "False")

    @classmethod
    def validate(cls, config: Optional["Config"] = None) -> bool:
        """
        Validates the numeric settings.

        Returns:
            bool: True if configuration is valid, raises ConfigError otherwise
        """
        config = config or cls()
        errors = []

        if config.ORACLE_GRID < 8:
            errors.append("ORACLE_GRID must be at least 8")
        if config.ORACLE_RESTARTS < 1:
            errors.append("ORACLE_RESTARTS must be at least 1")
        if config.ORACLE_REFINE_ITERS < 0:
            errors.append("ORACLE_REFINE_ITERS must be non-negative")
        if config.CAPACITY_STARTS < 1:
            errors.append("CAPACITY_STARTS must be at least 1")
        if config.DEGENERATE_GRID_POINTS < 3:
            errors.append("DEGENERATE_GRID_POINTS must be at least 3")

        for name in ("ORACLE_TOL", "CPTP_TOL", "SPAN_RANK_TOL", "STATE_TOL",
                     "COMPARE_TOL", "BEAT_TOL"):
            if not getattr(config, name) > 0:
                errors.append(f"{name} must be positive")

        if not isinstance(logging.getLevelName(config.LOG_LEVEL.upper()), int):
            errors.append(f"LOG_LEVEL {config.LOG_LEVEL!r} is not a logging level")

        if errors:
            raise ConfigError("Configuration validation failed:\n" + "\n".join(errors))

        return True

    def get_oracle_config(self) -> dict:
        """Returns the default oracle search settings as a dictionary."""
        return {
            "restarts": self.ORACLE_RESTARTS,
            "grid": self.ORACLE_GRID,
            "seed": self.DEFAULT_SEED,
            "refine_iters": self.ORACLE_REFINE_ITERS,
            "tol": self.ORACLE_TOL,
        }

    def get_logging_config(self) -> dict:
        """Returns logging configuration dictionary."""
        return {
            "level": self.LOG_LEVEL,
            "format": self.LOG_FORMAT,
            "json": self.LOG_JSON,
        }


# Environment-specific configurations
@dataclass
class DevelopmentConfig(Config):
    """Development-specific configuration."""
    LOG_LEVEL: str = "INFO"


@dataclass
class ProductionConfig(Config):
    """Production-specific configuration."""
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = True


@dataclass
class TestConfig(Config):
    """Test-specific configuration."""
    ENVIRONMENT: str = "test"
    DEBUG: bool = True
    LOG_LEVEL: str = "DEBUG"


def get_config() -> Config:
    """
    Factory function to get appropriate config based on environment.

    Returns:
        Config: Configuration instance for current environment
    """
    env = os.getenv("ENVIRONMENT", "development").lower()

    config_map = {
        "development": DevelopmentConfig,
        "production": ProductionConfig,
        "test": TestConfig,
    }

    return config_map.get(env, Config)()


# Create a singleton instance
config = get_config()


if __name__ == "__main__":
    from colorama import Fore, init

    init(autoreset=True)
    try:
        Config.validate(config)
        print(f"{Fore.GREEN}✓ Configuration validation passed")
        print(f"  Environment: {config.ENVIRONMENT}")
        print(f"  Seed: {config.DEFAULT_SEED}")
        print(f"  Oracle grid: {config.ORACLE_GRID} x {config.ORACLE_GRID}, "
              f"restarts {config.ORACLE_RESTARTS}")
        print(f"  Capacity starts: {config.CAPACITY_STARTS}")
        print(f"  Log level: {config.LOG_LEVEL} (json={config.LOG_JSON})")
    except ConfigError as e:
        print(f"{Fore.RED}✗ Configuration error: {e}")
