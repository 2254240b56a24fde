"""
Process settings for the simulator, read from SPM_* environment variables
and the repository .env file.

Only process-level knobs live here (worker pool size, output location,
logging, telemetry). Everything that defines an experiment - learner,
environment, horizons, seeds - lives in ExperimentConfig (app.models.experiment)
so that a run is fully described by its JSON config echo.

USAGE:
    from app.config.settings import settings

    workers = settings.spm_threads
    out_dir = settings.output_dir
"""
from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


# repository root: config -> app -> src2 -> root
PROJECT_ROOT = Path(__file__).parent.parent.parent.parent
ENV_FILE = PROJECT_ROOT / ".env"


class Settings(BaseSettings):
    """
    Every field has a default, so no .env is required. Field names are
    reachable through their SPM_* alias or by name. A bad value such as
    SPM_THREADS=0 fails when the module is imported.
    """

    model_config = SettingsConfigDict(
        env_file=str(ENV_FILE) if ENV_FILE.exists() else None,
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )

    # identity, stamped on telemetry resources
    app_name: str = Field(default="SPM Bandits Simulator")
    environment: str = Field(default="dev", validation_alias="APP_ENVIRONMENT")

    # execution
    spm_threads: int = Field(
        default=1,
        ge=1,
        validation_alias="SPM_THREADS",
        description="Upper bound on concurrent replication workers",
    )
    output_dir: Path = Field(
        default=Path("results"),
        validation_alias="SPM_OUTPUT_DIR",
        description="Default directory for results.csv / summary.json / reports",
    )

    # logging and telemetry
    log_level: str = Field(default="INFO", validation_alias="SPM_LOG_LEVEL")
    telemetry_exporter: Literal["none", "console"] = Field(
        default="none",
        validation_alias="SPM_TELEMETRY",
        description="'console' prints spans and metrics to stdout; 'none' keeps OTel no-op",
    )
    debug_port: int | None = Field(
        default=None,
        ge=1,
        le=65535,
        validation_alias="SPM_DEBUG_PORT",
        description="When set, main.py waits for a debugpy client on this port",
    )


@lru_cache()
def get_settings() -> Settings:
    """Settings are read once per process; call get_settings.cache_clear() after patching env vars."""
    return Settings()


settings = get_settings()
