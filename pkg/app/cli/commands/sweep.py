from pathlib import Path
from typing import Annotated

import typer

from app.cli.deps import CatalogOption, ConfigOption, FormatOption, JobsOption, OutOption, cli_errors, get_experiment
from app.crud.tables import outcomes_csv, write_text
from app.models.errors import ErrorEvent
from app.models.experiment import RenderSpec
from app.services.error_model import SweepResult
from app.services.render import render


def write_diagrams(result: SweepResult, directory: Path, spec: RenderSpec, m: int) -> int:
    """Un diagrama por evento; los perturbados marcan las diferencias con la corrida sin error."""
    reference = result.reference()
    if result.diagrams is None or reference is None:
        return 0
    for event, diagram in result.diagrams.items():
        name = "none" if event == ErrorEvent.no_error() else f"site-{event.site_label(m)}"
        highlighted = spec.model_copy(update={"highlight": event.is_flip})
        write_text(
            path=directory / f"{name}{spec.suffix}",
            content=render(diagram, highlighted, reference),
        )
    return len(result.diagrams)


def cmd_sweep(
    config: ConfigOption,
    out: OutOption = None,
    jobs: JobsOption = None,
    format: FormatOption = None,
    diagrams: Annotated[
        bool | None, typer.Option("--diagrams/--no-diagrams", help="Render every perturbed run")
    ] = None,
    catalog: CatalogOption = None,
) -> None:
    """Run every error event and write outcomes.csv."""
    with cli_errors():
        experiment = get_experiment(config, catalog)
        settings_out = experiment.config.output
        directory = out or Path(settings_out.dir)
        keep = settings_out.diagrams if diagrams is None else diagrams
        result = experiment.sweep(jobs, keep_diagrams=keep)
        write_text(path=directory / "outcomes.csv", content=outcomes_csv(result.table))
        written = 0
        if keep:
            spec = RenderSpec(format=format or settings_out.format)
            written = write_diagrams(result, directory / "diagrams", spec, result.table.model.m)
        changed = sum(result.table.changed(entry) for entry in result.table.entries)
        typer.echo(
            f"{len(result.table.entries)} events, {changed} changed, initial {result.table.initial_state}"
            + (f", {written} diagrams" if keep else "")
        )
