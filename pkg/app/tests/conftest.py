from collections.abc import Generator
from pathlib import Path

import pytest
from typer.testing import CliRunner

from app.crud.catalog_store import save_catalog
from app.models.ether import Catalog, CatalogBounds
from app.services.catalog_builder import derive_catalog


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    """Catálogo derivado con las cotas por defecto; se comparte entre tests."""
    return derive_catalog(CatalogBounds())


@pytest.fixture(scope="session")
def catalog_file(catalog: Catalog, tmp_path_factory: pytest.TempPathFactory) -> Path:
    return save_catalog(catalog=catalog, path=tmp_path_factory.mktemp("catalog") / "catalog.txt")


@pytest.fixture(scope="module")
def runner() -> Generator[CliRunner, None, None]:
    yield CliRunner()
