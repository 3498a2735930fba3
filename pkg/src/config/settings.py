from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):

    ENVIRONMENT: str = Field("development", description="Environment (development, testing, production)")
    DEBUG: bool = Field(False, description="Debug mode")

    # Logging settings
    LOG_LEVEL: str = Field("INFO", description="Default log level (DEBUG, INFO, WARNING, ERROR)")
    LOG_FORMAT: str = Field("console", description="Log renderer (console, json)")
    ENABLE_FILE_LOGGING: bool = Field(False, description="Enable logging to files")
    LOG_DIR: str = Field("logs", description="Directory for log files")

    # Monte Carlo accounting
    DEFAULT_SEED: int = Field(20170817, ge=0, lt=2**64, description="Seed used when --seed is omitted")
    DEFAULT_TRIALS: int = Field(1_000_000, ge=1, description="Photons per accounting run when --trials is omitted")
    ACCOUNTING_WORKERS: int = Field(1, ge=1, description="Worker threads for accounting blocks")
    ACCOUNTING_BLOCK_SIZE: int = Field(65536, ge=1, description="Trials per counter-based RNG block")

    # Scans
    DEFAULT_SCAN_POINTS: int = Field(100, ge=2, description="Phase points when --points is omitted")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


@lru_cache
def get_settings() -> Settings:
    return Settings()
