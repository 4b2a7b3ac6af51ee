"""Engine configuration management."""

from typing import Optional, Tuple, Type
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict
from pydantic import Field, field_validator
import logging

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Engine settings.

    Only explicit values (CLI flags or keyword arguments) are honoured;
    environment variables and dotenv files are ignored so that a run is
    fully determined by its command line.
    """

    # Application
    APP_NAME: str = "conecat"
    APP_VERSION: str = "1.0.0"

    # Caps
    MAX_SEMIGROUP_SIZE: int = Field(default=512, ge=1, description="Largest accepted semigroup order")
    MAX_CONE_CANDIDATES: int = Field(
        default=1_000_000, ge=1, description="Partial cone assignments explored before giving up"
    )
    MAX_CATALOG_SEMIGROUP_N: int = Field(default=4, ge=1, description="Largest n for T_n, I_n builders")
    MAX_CATALOG_CATEGORY_N: int = Field(default=3, ge=1, description="Largest n for powerset-style categories")
    MAX_ISO_OBJECTS: int = Field(default=10, ge=1, description="Largest object count for category iso search")
    CONE_ASSOCIATIVITY_LIMIT: int = Field(
        default=64, ge=1, description="Largest cone semigroup checked exhaustively for coherence"
    )

    # Logging
    LOG_LEVEL: str = Field(default="WARNING", description="Root log level")
    LOG_JSON: bool = Field(default=False, description="Emit JSON log lines")
    LOG_FILE: Optional[str] = Field(default=None, description="Optional log file path")

    # Reports
    REPORT_SCHEMA_VERSION: int = Field(default=1)
    SEED: Optional[int] = Field(default=None, description="Reserved; every computation is deterministic")

    @field_validator("LOG_LEVEL")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        """Upper-case and validate the log level."""
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown log level: {v}")
        return level

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    model_config = SettingsConfigDict(
        case_sensitive=True,
        extra="ignore",
        validate_assignment=True,
    )


settings = Settings()

_CATALOG_CAPS = ("MAX_CATALOG_SEMIGROUP_N", "MAX_CATALOG_CATEGORY_N")


def apply_overrides(**overrides) -> Settings:
    """Apply flag values onto the shared settings object.

    ``None`` values are skipped. Raising a catalog cap above its default
    is allowed but logged as a warning.

    Args:
        **overrides: Field names mapped to new values

    Returns:
        The updated settings singleton
    """
    defaults = Settings()
    for name, value in overrides.items():
        if value is None:
            continue
        if not hasattr(settings, name):
            raise ValueError(f"Unknown setting: {name}")
        setattr(settings, name, value)
        if name in _CATALOG_CAPS and value > getattr(defaults, name):
            logger.warning(
                f"{name} raised to {value}; cone enumeration may hit the search cap",
                extra={"check": name},
            )
    return settings


def reset_settings() -> Settings:
    """Restore every field to its default value."""
    defaults = Settings()
    for name in Settings.model_fields:
        setattr(settings, name, getattr(defaults, name))
    return settings
