import typer

from app.cli.commands import ether, gliders, reweight, sample, sweep
from app.core.config import settings
from app.core.logging import get_logger

logger = get_logger(__name__)

app = typer.Typer(
    name=settings.PROJECT_NAME,
    help="Rule 110 ether, gliders and top-down reweighting of single-error events.",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)
app.command("ether")(ether.cmd_ether)
app.add_typer(gliders.router, name="gliders")
app.command("sweep")(sweep.cmd_sweep)
app.command("reweight")(reweight.cmd_reweight)
app.command("sample")(sample.cmd_sample)


if __name__ == "__main__":
    app()
