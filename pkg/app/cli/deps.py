from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated

import typer

from app.core.exceptions import AppException
from app.core.logging import bind_experiment, get_logger
from app.crud.catalog_store import load_catalog
from app.crud.experiment_config import config_hash, load_config
from app.crud.tables import write_text
from app.models.ether import Catalog, CatalogBounds
from app.models.experiment import RenderFormat
from app.services.catalog_builder import derive_catalog
from app.services.experiment_service import ExperimentService, load_experiment_catalog

logger = get_logger(__name__)

ConfigOption = Annotated[Path, typer.Option("--config", "-c", help="Experiment config file")]
OutOption = Annotated[Path | None, typer.Option("--out", "-o", help="Output path")]
FormatOption = Annotated[RenderFormat | None, typer.Option("--format", "-f", help="Diagram format")]
JobsOption = Annotated[int | None, typer.Option("--jobs", "-j", min=1, help="Worker processes for the sweep")]
SeedOption = Annotated[int | None, typer.Option("--seed", min=0, max=2**64 - 1, help="Sampler seed")]
CatalogOption = Annotated[
    Path | None, typer.Option("--catalog", help="Load an exported catalog instead of deriving one")
]


@contextmanager
def cli_errors() -> Iterator[None]:
    """Traduce AppException a un diagnóstico de una línea y su código de salida."""
    try:
        yield
    except AppException as e:
        logger.debug("Command failed", error=e.detail, exit_code=e.exit_code)
        typer.echo(f"error: {e.detail}", err=True)
        raise typer.Exit(code=e.exit_code)


def get_experiment(config_path: Path, catalog_path: Path | None = None) -> ExperimentService:
    config = load_config(path=config_path)
    bind_experiment(config_hash(config), path=str(config_path))
    return ExperimentService(config, load_experiment_catalog(config, catalog_path))


def get_catalog(catalog_path: Path | None = None, bounds: CatalogBounds | None = None) -> Catalog:
    if catalog_path is not None:
        return load_catalog(path=catalog_path)
    return derive_catalog(bounds or CatalogBounds())


def emit(content: str, out: Path | None) -> None:
    """Escribe en `out` o en stdout."""
    if out is None:
        typer.echo(content, nl=False)
        return
    write_text(path=out, content=content)
