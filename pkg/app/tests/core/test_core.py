import pytest
import structlog

from app.core.config import Settings
from app.core.exceptions import (
    AppException,
    ConfigException,
    EngineException,
    NormalizationImpossibleException,
    NotFoundException,
    UnsettledInitialException,
    UnsupportedCaseException,
    ValidationException,
)
from app.core.logging import bind_experiment


@pytest.mark.parametrize(
    ("exc", "code"),
    [
        (EngineException(), 1),
        (ConfigException(), 2),
        (ValidationException(), 2),
        (NotFoundException("Glider 'g09'"), 2),
        (UnsupportedCaseException(), 2),
        (NormalizationImpossibleException(), 3),
        (UnsettledInitialException(), 4),
    ],
)
def test_exit_codes(exc: AppException, code: int) -> None:
    assert exc.exit_code == code
    assert isinstance(exc, AppException)


def test_not_found_detail() -> None:
    assert NotFoundException("Glider 'g09'").detail == "Glider 'g09' not found"


def test_bind_experiment_replaces_context() -> None:
    bind_experiment("aaaa", path="one.cfg")
    bind_experiment("bbbb")
    assert structlog.contextvars.get_contextvars() == {"config": "bbbb"}
    structlog.contextvars.clear_contextvars()


def test_empty_cache_dir_disables_cache(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("CATALOG_CACHE_DIR", raising=False)
    assert Settings(CATALOG_CACHE_DIR="").catalog_cache_enabled is False
    assert Settings().catalog_cache_enabled is True
