from pathlib import Path
from typing import Annotated

import typer

from app.cli.deps import FormatOption, OutOption, cli_errors, emit
from app.core.exceptions import ConfigException
from app.core.logging import get_logger
from app.crud.experiment_config import load_config
from app.models.ether import EtherPhase
from app.models.experiment import RenderFormat, RenderSpec
from app.services.ether_service import derive_ether, ether_row
from app.services.lattice_engine import evolve
from app.services.render import render

logger = get_logger(__name__)


def cmd_ether(
    width: Annotated[int, typer.Option(help="Lattice width, a multiple of 14")] = 14,
    steps: Annotated[int, typer.Option(help="Time steps to render")] = 28,
    config: Annotated[Path | None, typer.Option("--config", "-c", help="Take width, steps and phase from a config")] = None,
    out: OutOption = None,
    format: FormatOption = None,
) -> None:
    """Render the ether evolution."""
    with cli_errors():
        temporal_phase = 0
        chosen = format or RenderFormat.PBM
        if config is not None:
            experiment = load_config(path=config)
            width, steps = experiment.lattice.width, experiment.lattice.steps
            temporal_phase = experiment.ether.temporal_phase
            chosen = format or experiment.output.format
        if width <= 0 or steps <= 0:
            raise ConfigException("width and steps must be positive")
        tile = derive_ether()
        phase = EtherPhase(temporal_offset=temporal_phase % tile.temporal_period)
        diagram = evolve(ether_row(width, phase, tile), steps)
        logger.info("Ether rendered", width=width, steps=steps, period=tile.temporal_period, drift=tile.drift)
        emit(render(diagram, RenderSpec(format=chosen)), out)
