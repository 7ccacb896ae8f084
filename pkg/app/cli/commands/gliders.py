from typing import Annotated

import typer

from app.cli.deps import CatalogOption, FormatOption, OutOption, cli_errors, emit, get_catalog
from app.core.exceptions import ValidationException
from app.crud.catalog_store import dump_catalog
from app.models.ether import Catalog, CatalogBounds
from app.models.experiment import RenderFormat, RenderSpec
from app.services.catalog_builder import verify_glider
from app.services.decomposition import MIN_ETHER_GAP
from app.services.ether_service import build_ether_index
from app.services.lattice_engine import evolve
from app.services.placement import isolated_ring, resolve_glider
from app.services.render import render

router = typer.Typer(help="Derived glider catalog", no_args_is_help=True)

MaxWidthOption = Annotated[int, typer.Option("--max-width", min=1, help="Widest residual block searched")]
MaxPeriodOption = Annotated[int, typer.Option("--max-period", min=1, help="Longest period searched")]
SeedWidthOption = Annotated[int, typer.Option("--seed-width", min=1, max=16, help="Widest seed block")]


def _catalog(catalog: CatalogOption, max_width: int, max_period: int, seed_width: int) -> Catalog:
    return get_catalog(
        catalog, CatalogBounds(max_width=max_width, max_period=max_period, seed_width=seed_width)
    )


@router.command("list")
def list_gliders(
    catalog: CatalogOption = None,
    max_width: MaxWidthOption = 30,
    max_period: MaxPeriodOption = 30,
    seed_width: SeedWidthOption = 8,
) -> None:
    """List id, period, displacement and velocity, ordered by (velocity, period, width)."""
    with cli_errors():
        found = _catalog(catalog, max_width, max_period, seed_width)
        typer.echo(f"{'id':<6}{'period':>7}{'disp':>6}{'velocity':>10}{'disloc':>8}{'width':>7}")
        for glider in found.gliders:
            typer.echo(
                f"{glider.id:<6}{glider.period:>7}{glider.displacement:>6}"
                f"{str(glider.velocity):>10}{glider.dislocation:>8}{glider.width:>7}"
            )


@router.command("show")
def show_glider(
    glider_id: Annotated[str, typer.Argument(metavar="ID", help="Glider id, or fastest / slowest")],
    steps: Annotated[int, typer.Option(min=1, help="Time steps to render")] = 60,
    phase: Annotated[int, typer.Option(min=0, help="Starting phase")] = 0,
    verify: Annotated[bool, typer.Option("--verify", help="Check ten periods of clean propagation")] = False,
    catalog: CatalogOption = None,
    max_width: MaxWidthOption = 30,
    max_period: MaxPeriodOption = 30,
    seed_width: SeedWidthOption = 8,
    out: OutOption = None,
    format: FormatOption = None,
) -> None:
    """Render one glider propagating on its own ring."""
    with cli_errors():
        found = _catalog(catalog, max_width, max_period, seed_width)
        glider = resolve_glider(found, glider_id)
        if phase >= glider.period:
            raise ValidationException(f"phase {phase} out of range for glider {glider.id} (period {glider.period})")
        if verify and not verify_glider(glider, found.ether):
            raise ValidationException(f"glider {glider.id} failed verification")
        frame = glider.frames[phase]
        row, _ = isolated_ring(
            frame, glider.dislocation, build_ether_index(found.ether), frame.width + 4 * MIN_ETHER_GAP
        )
        emit(render(evolve(row, steps), RenderSpec(format=format or RenderFormat.ASCII)), out)


@router.command("export")
def export_catalog(
    catalog: CatalogOption = None,
    max_width: MaxWidthOption = 30,
    max_period: MaxPeriodOption = 30,
    seed_width: SeedWidthOption = 8,
    out: OutOption = None,
) -> None:
    """Write the catalog in its plain-text format."""
    with cli_errors():
        emit(dump_catalog(_catalog(catalog, max_width, max_period, seed_width)), out)
