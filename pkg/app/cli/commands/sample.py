from pathlib import Path
from typing import Annotated

import typer

from app.cli.deps import CatalogOption, ConfigOption, JobsOption, OutOption, SeedOption, cli_errors, get_experiment
from app.crud.tables import samples_csv, write_text


def cmd_sample(
    config: ConfigOption,
    n: Annotated[int | None, typer.Option("--n", "-n", min=0, help="Number of draws (default run.samples)")] = None,
    seed: SeedOption = None,
    out: OutOption = None,
    jobs: JobsOption = None,
    catalog: CatalogOption = None,
) -> None:
    """Draw error events from the modified distribution and write samples.csv."""
    with cli_errors():
        experiment = get_experiment(config, catalog)
        events = experiment.sample(n=n, seed=seed, jobs=jobs)
        directory = out or Path(experiment.config.output.dir)
        write_text(path=directory / "samples.csv", content=samples_csv(events, experiment.config.error.m))
        typer.echo(f"{len(events)} draws written")
