"""
Configuration settings for the spinlab system.
"""

import os
import logging
from dataclasses import dataclass, field
from pathlib import Path

try:
    from ..errors import ConfigError
except ImportError:
    from errors import ConfigError

# Set up logger
logger = logging.getLogger(__name__)

# Try to load environment variables from .env file
try:
    from dotenv import load_dotenv
    env_path = Path(".env")
    if env_path.exists():
        try:
            load_dotenv(env_path)
            logger.info(f"Loaded environment variables from {env_path}")
        except Exception as e:
            logger.warning(f"Error loading .env file: {e}")
            logger.warning("Using environment variables directly")
except ImportError:
    logger.warning("python-dotenv not installed, using environment variables directly")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, str(default))
    try:
        return int(raw.replace("_", ""))
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


@dataclass
class Settings:
    """Configuration settings for the spinlab system.

    Every field is read from the environment when the instance is created, so
    a fresh ``Settings()`` reflects variables exported after import.
    """

    # Search caps
    cap_primes: int = field(default_factory=lambda: _env_int("SPINLAB_CAP_PRIMES", 10_000_000))
    cap_group: int = field(default_factory=lambda: _env_int("SPINLAB_CAP_GROUP", 10_000_000))
    cap_bfs_layers: int = field(default_factory=lambda: _env_int("SPINLAB_CAP_BFS", 64))
    foya_cap: int = field(default_factory=lambda: _env_int("SPINLAB_FOYA_CAP", 64))

    # Witt map repair search
    witt_bound: int = field(default_factory=lambda: _env_int("SPINLAB_WITT_BOUND", 50))
    witt_candidates: int = field(default_factory=lambda: _env_int("SPINLAB_WITT_CANDIDATES", 200_000))

    # Width experiments: largest group order rerun in the Spin (±1 resolved) convention
    dual_convention_limit: int = field(default_factory=lambda: _env_int("SPINLAB_DUAL_LIMIT", 5_000))

    # Run defaults
    default_seed: int = field(default_factory=lambda: _env_int("SPINLAB_SEED", 0))
    default_dim: int = field(default_factory=lambda: _env_int("SPINLAB_DIM", 20))

    # Output and logging
    output_dir: str = field(default_factory=lambda: os.getenv("SPINLAB_OUTPUT_DIR", "./spinlab_output"))
    log_level: str = field(default_factory=lambda: os.getenv("LOG_LEVEL", "INFO").upper())

    def __post_init__(self):
        """Validate settings."""
        for name in ("cap_primes", "cap_group", "cap_bfs_layers", "foya_cap",
                     "witt_bound", "witt_candidates", "dual_convention_limit"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.default_dim < 2 or self.default_dim % 2:
            raise ConfigError(f"default_dim must be even and at least 2, got {self.default_dim}")
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ConfigError(f"Unknown log level {self.log_level!r}")


# Create settings instance
settings = Settings()
