from pathlib import Path
from typing import Annotated

import typer

from app.cli.deps import CatalogOption, ConfigOption, JobsOption, OutOption, cli_errors, get_experiment
from app.crud.experiment_config import config_hash
from app.crud.tables import modified_csv, write_text
from app.services.topdown_weights import kl_report


def cmd_reweight(
    config: ConfigOption,
    out: OutOption = None,
    jobs: JobsOption = None,
    report: Annotated[Path | None, typer.Option("--report", help="Also write the divergence report here")] = None,
    catalog: CatalogOption = None,
) -> None:
    """Sweep, apply the weight rule and write modified.csv."""
    with cli_errors():
        experiment = get_experiment(config, catalog)
        table, distribution = experiment.reweight(jobs)
        directory = out or Path(experiment.config.output.dir)
        write_text(
            path=directory / "modified.csv",
            content=modified_csv(distribution, config_hash(experiment.config)),
        )
        summary = kl_report(distribution, table)
        if report is not None:
            write_text(path=report, content=summary.render())
        typer.echo(
            f"rule {distribution.rule}, normalization {distribution.normalization:.12g}, "
            f"divergence {summary.divergence:.12g}"
        )
