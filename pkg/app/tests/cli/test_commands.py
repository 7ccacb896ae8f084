"""
Tests de la línea de comandos: formatos de salida, códigos de salida y determinismo.
"""

from pathlib import Path

import pytest
from pytest_mock import MockerFixture
from typer.testing import CliRunner

from app.cli.main import app
from app.crud.catalog_store import dump_catalog
from app.tests.utils.catalogs import fake_catalog
from app.tests.utils.utils import random_row

CONFIGS = Path(__file__).resolve().parents[3] / "configs"

PAIR_APART = """
lattice.width = 700
lattice.steps = 200
lattice.fit_width = true
glider.1 = slowest 300 0
glider.2 = fastest 360 0
error.p = 0.1
error.m = 10
settle.window = 60
run.seed = 5
run.samples = 2000
"""


def write_config(tmp_path: Path, text: str, name: str = "exp.cfg") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


@pytest.mark.unit
class TestEtherCommand:
    def test_default_pbm(self, runner: CliRunner) -> None:
        result = runner.invoke(app, ["ether"])
        assert result.exit_code == 0
        assert result.stdout.startswith("P1\n14 29\n")

    def test_ascii(self, runner: CliRunner) -> None:
        result = runner.invoke(app, ["ether", "--width", "28", "--steps", "3", "--format", "ascii"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert len(lines) == 4
        assert set("".join(lines)) == {"█", "·"}

    def test_invalid_width(self, runner: CliRunner) -> None:
        result = runner.invoke(app, ["ether", "--width", "15"])
        assert result.exit_code == 2
        assert "error:" in result.output

    def test_from_config_to_file(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / "ether.pbm"
        result = runner.invoke(app, ["ether", "--config", str(CONFIGS / "ether.cfg"), "--out", str(out)])
        assert result.exit_code == 0
        assert out.read_text().startswith("P1\n56 57\n")

    def test_output_is_byte_stable(self, runner: CliRunner, tmp_path: Path) -> None:
        first, second = tmp_path / "a.pbm", tmp_path / "b.pbm"
        runner.invoke(app, ["ether", "--width", "70", "--out", str(first)])
        runner.invoke(app, ["ether", "--width", "70", "--out", str(second)])
        assert first.read_bytes() == second.read_bytes()


@pytest.mark.unit
class TestGlidersCommand:
    @pytest.fixture(autouse=True)
    def fake(self, mocker: MockerFixture) -> None:
        mocker.patch("app.cli.deps.derive_catalog", return_value=fake_catalog())

    def test_list(self, runner: CliRunner) -> None:
        result = runner.invoke(app, ["gliders", "list"])
        assert result.exit_code == 0
        ids = [line.split()[0] for line in result.stdout.splitlines()[1:]]
        assert ids == ["g01", "g02", "g03"]
        assert "-1/2" in result.stdout

    def test_show_unknown(self, runner: CliRunner) -> None:
        result = runner.invoke(app, ["gliders", "show", "g99"])
        assert result.exit_code == 2
        assert "g99" in result.output

    def test_show_phase_out_of_range(self, runner: CliRunner) -> None:
        result = runner.invoke(app, ["gliders", "show", "g03", "--phase", "3"])
        assert result.exit_code == 2

    def test_export(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / "catalog.txt"
        result = runner.invoke(app, ["gliders", "export", "--out", str(out)])
        assert result.exit_code == 0
        assert out.read_text() == dump_catalog(fake_catalog())

    def test_list_from_exported_file(self, runner: CliRunner, tmp_path: Path) -> None:
        path = tmp_path / "catalog.txt"
        path.write_text(dump_catalog(fake_catalog()))
        result = runner.invoke(app, ["gliders", "list", "--catalog", str(path)])
        assert result.exit_code == 0
        assert "g03" in result.stdout


@pytest.mark.unit
class TestExitCodes:
    @pytest.fixture(autouse=True)
    def fake(self, mocker: MockerFixture) -> None:
        mocker.patch("app.cli.deps.load_experiment_catalog", return_value=fake_catalog())

    def test_missing_config(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(app, ["sweep", "--config", str(tmp_path / "absent.cfg")])
        assert result.exit_code == 2

    def test_bad_config(self, runner: CliRunner, tmp_path: Path) -> None:
        path = write_config(tmp_path, "lattice.width = 140\nlattice.steps = oops\n")
        result = runner.invoke(app, ["sweep", "--config", str(path)])
        assert result.exit_code == 2
        assert "lattice.steps" in result.output

    def test_turbulent_initial_row(self, runner: CliRunner, tmp_path: Path, mocker: MockerFixture) -> None:
        mocker.patch("app.services.experiment_service.splice", return_value=random_row(140, seed=1))
        path = write_config(tmp_path, "lattice.width = 140\nlattice.steps = 20\nsettle.window = 14\n")
        result = runner.invoke(app, ["sweep", "--config", str(path), "--out", str(tmp_path / "out")])
        assert result.exit_code == 4
        assert "turbulent" in result.output

    def test_reweight_without_gliders_is_unsupported(self, runner: CliRunner, tmp_path: Path) -> None:
        path = write_config(tmp_path, "lattice.width = 140\nlattice.steps = 20\nsettle.window = 14\n")
        result = runner.invoke(app, ["reweight", "--config", str(path), "--out", str(tmp_path / "out")])
        assert result.exit_code == 2

    def test_sweep_of_pure_ether(self, runner: CliRunner, tmp_path: Path) -> None:
        path = write_config(tmp_path, "lattice.width = 140\nlattice.steps = 20\nsettle.window = 14\nerror.m = 2\n")
        out = tmp_path / "out"
        result = runner.invoke(app, ["sweep", "--config", str(path), "--out", str(out)])
        assert result.exit_code == 0
        lines = (out / "outcomes.csv").read_text().splitlines()
        assert lines[0] == "site,base_prob,state_fingerprint,changed,settled"
        assert len(lines) == 1 + 6
        assert lines[1] == "NONE,0.90000000000000002,[],0,1"


@pytest.mark.slow
@pytest.mark.integration
class TestExperiments:
    def test_sweep_reference_collision(self, runner: CliRunner, tmp_path: Path, catalog_file: Path) -> None:
        out = tmp_path / "collision-sweep"
        result = runner.invoke(
            app,
            ["sweep", "--config", str(CONFIGS / "collision-sweep.cfg"), "--out", str(out), "--catalog", str(catalog_file)],
        )
        assert result.exit_code == 0, result.output
        lines = (out / "outcomes.csv").read_text().splitlines()
        assert len(lines) == 1 + 22
        assert len(list((out / "diagrams").iterdir())) == 22
        assert {line.split(",")[-2] for line in lines[2:]} == {"0", "1"}

    def test_sweep_jobs_do_not_change_output(self, runner: CliRunner, tmp_path: Path, catalog_file: Path) -> None:
        outputs = []
        for jobs in ("1", "8"):
            out = tmp_path / f"jobs{jobs}"
            result = runner.invoke(
                app,
                [
                    "sweep",
                    "--config",
                    str(CONFIGS / "collision-sweep.cfg"),
                    "--out",
                    str(out),
                    "--jobs",
                    jobs,
                    "--no-diagrams",
                    "--catalog",
                    str(catalog_file),
                ],
            )
            assert result.exit_code == 0, result.output
            outputs.append((out / "outcomes.csv").read_bytes())
        assert outputs[0] == outputs[1]

    def test_reweight_stability_on_separating_pair(
        self, runner: CliRunner, tmp_path: Path, catalog_file: Path
    ) -> None:
        path = write_config(tmp_path, PAIR_APART)
        report = tmp_path / "report.txt"
        result = runner.invoke(
            app,
            [
                "reweight",
                "--config",
                str(path),
                "--out",
                str(tmp_path / "out"),
                "--report",
                str(report),
                "--catalog",
                str(catalog_file),
            ],
        )
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "out" / "modified.csv").read_text().splitlines()
        assert lines[0].startswith("# rule=stability normalization=")
        kept = [float(line.split(",")[3]) for line in lines[2:] if line.split(",")[2] == "1"]
        assert abs(sum(kept) - 1.0) <= 1e-12
        assert report.read_text().startswith("# top-down reweighting report")

    def test_reweight_unreachable_target(self, runner: CliRunner, tmp_path: Path, catalog_file: Path) -> None:
        text = PAIR_APART + "rule.kind = forcing\nrule.target = [fastest,fastest,fastest,fastest]\n"
        path = write_config(tmp_path, text)
        result = runner.invoke(
            app,
            ["reweight", "--config", str(path), "--out", str(tmp_path / "out"), "--catalog", str(catalog_file)],
        )
        assert result.exit_code == 3
        assert "unreachable" in result.output

    def test_sample_is_deterministic(self, runner: CliRunner, tmp_path: Path, catalog_file: Path) -> None:
        path = write_config(tmp_path, PAIR_APART)
        files = []
        for name in ("a", "b"):
            out = tmp_path / name
            result = runner.invoke(
                app, ["sample", "--config", str(path), "--out", str(out), "--catalog", str(catalog_file)]
            )
            assert result.exit_code == 0, result.output
            files.append((out / "samples.csv").read_bytes())
        assert files[0] == files[1]
        assert files[0].count(b"\n") == 1 + 2000


@pytest.mark.slow
@pytest.mark.integration
def test_golden_outputs(runner: CliRunner, tmp_path: Path, catalog_file: Path) -> None:
    """Compara con las salidas de referencia si ya fueron generadas por scripts/regen_golden.sh."""
    golden = CONFIGS / "golden"
    if not golden.exists():
        pytest.skip("golden outputs not generated yet")
    references = sorted(golden.glob("*/outcomes.csv")) + sorted(golden.glob("*/modified.csv"))
    assert references
    for reference in references:
        name = reference.parent.name
        command = "sweep" if reference.name == "outcomes.csv" else "reweight"
        out = tmp_path / command / name
        args = [command, "--config", str(CONFIGS / f"{name}.cfg"), "--out", str(out), "--jobs", "1"]
        if command == "sweep":
            args.append("--no-diagrams")
        result = runner.invoke(app, [*args, "--catalog", str(catalog_file)])
        assert result.exit_code == 0, result.output
        assert (out / reference.name).read_bytes() == reference.read_bytes()
