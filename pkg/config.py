"""
Configuration and environment variable validation.
"""
import os
import sys
from pathlib import Path
from dotenv import load_dotenv
from logger import logger

# Load environment variables
load_dotenv()

ROOT = Path(__file__).resolve().parent


class ConfigError(Exception):
    """Raised when configuration is invalid or missing"""
    pass


class Config:
    """Checker configuration with validation"""

    # Kernel
    FUEL: int

    # Corpus
    MANIFEST: Path
    JOBS: int

    # Logging
    LOG_LEVEL: str
    LOG_FORMAT: str

    @classmethod
    def load(cls) -> None:
        """Load and validate all configuration"""
        cls.FUEL = cls._get_int("COHC_FUEL", 1_000_000)

        manifest = os.getenv("COHC_MANIFEST")
        cls.MANIFEST = Path(manifest) if manifest else ROOT / "corpus" / "manifest.txt"
        cls.JOBS = cls._get_int("COHC_JOBS", 1)

        # Logging
        cls.LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()
        cls.LOG_FORMAT = os.getenv("LOG_FORMAT", "text")

        cls._validate()

        logger.debug("Configuration loaded successfully", extra={
            "fuel": cls.FUEL,
            "manifest": str(cls.MANIFEST),
            "jobs": cls.JOBS,
        })

    @classmethod
    def _get_int(cls, key: str, default: int) -> int:
        """Get an integer environment variable or raise error"""
        value = os.getenv(key)
        if value is None or value.strip() == "":
            return default
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"Environment variable {key} must be an integer, got {value!r}")

    @classmethod
    def _validate(cls) -> None:
        """Validate configuration values"""
        if cls.FUEL < 1:
            raise ConfigError("COHC_FUEL must be at least 1")

        if cls.JOBS < 1:
            raise ConfigError("COHC_JOBS must be at least 1")

        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if cls.LOG_LEVEL not in valid_levels:
            logger.warning(f"Invalid LOG_LEVEL '{cls.LOG_LEVEL}', defaulting to WARNING")
            cls.LOG_LEVEL = "WARNING"

        if cls.LOG_FORMAT not in {"json", "text"}:
            logger.warning(f"Invalid LOG_FORMAT '{cls.LOG_FORMAT}', defaulting to text")
            cls.LOG_FORMAT = "text"


# Load configuration on module import
try:
    Config.load()
except ConfigError as e:
    logger.error(f"Configuration error: {e}")
    sys.exit(2)
