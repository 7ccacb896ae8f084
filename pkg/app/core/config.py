from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BeforeValidator, computed_field
from pydantic_settings import BaseSettings, SettingsConfigDict


def parse_optional_path(v: Any) -> Path | None:
    if v is None or (isinstance(v, str) and not v.strip()):
        return None
    if isinstance(v, str | Path):
        return Path(v)
    raise ValueError(v)


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        # Use .env file in the root directory
        env_file=".env",
        env_ignore_empty=True,
        extra="ignore",
    )
    PROJECT_NAME: str = "topdown-ca"
    ENVIRONMENT: Literal["local", "ci", "production"] = "local"
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    # Cache de catálogos derivados; vacío para desactivarlo
    CATALOG_CACHE_DIR: Annotated[
        Path | None, BeforeValidator(parse_optional_path)
    ] = Path(".cache/catalog")

    # Workers por defecto para el barrido cuando ni el config ni --jobs lo fijan
    DEFAULT_JOBS: int = 1

    @computed_field  # type: ignore[prop-decorator]
    @property
    def catalog_cache_enabled(self) -> bool:
        return self.CATALOG_CACHE_DIR is not None


settings = Settings()
