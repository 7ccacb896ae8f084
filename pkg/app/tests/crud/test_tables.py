import csv
import io
from pathlib import Path

from app.crud.tables import modified_csv, outcomes_csv, samples_csv, write_text
from app.models.errors import ErrorEvent
from app.models.ether import UNSETTLED
from app.models.weights import WeightRule
from app.services.topdown_weights import modify
from app.tests.utils.tables import make_table, state


def test_outcomes_columns_and_rows() -> None:
    table = make_table(state("g01"), [state("g01"), state("g02", "g01"), UNSETTLED])
    text = outcomes_csv(table)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["site", "base_prob", "state_fingerprint", "changed", "settled"]
    assert rows[1] == ["NONE", "0.90000000000000002", "[g01]", "0", "1"]
    assert rows[2][0] == "1"
    assert rows[3][2:] == ["[g02,g01]", "1", "1"]
    assert rows[4][2:] == ["UNSETTLED", "1", "0"]
    assert len(rows) == 5
    assert "\r" not in text



def test_changed_compares_with_the_error_free_outcome() -> None:
    """Par que se aniquila sin error: los sitios que también dan [] no cuentan como cambio."""
    table = make_table(state("g01", "g02"), [state(), state("g03"), state()], no_error_state=state())
    rows = list(csv.reader(io.StringIO(outcomes_csv(table))))
    assert [row[3] for row in rows[1:]] == ["0", "0", "1", "0"]


def test_float_format_has_17_significant_digits() -> None:
    table = make_table(state("g01"), [state("g01")] * 21)
    rows = list(csv.reader(io.StringIO(outcomes_csv(table))))
    assert rows[2][1] == format(0.1 / 21, ".17g")
    assert float(rows[2][1]) == 0.1 / 21


def test_modified_header() -> None:
    table = make_table(state("g01"), [state("g01"), state("g02"), state("g01")])
    distribution = modify(table, WeightRule.stability(), colliding=False)
    text = modified_csv(distribution, "abcdef0123456789")
    lines = text.splitlines()
    assert lines[0].startswith("# rule=stability normalization=")
    assert lines[0].endswith(" config=abcdef0123456789")
    assert lines[1] == "event,base_prob,weight,modified_prob"
    assert lines[3].split(",")[2] == "1"
    assert lines[4].split(",")[2:] == ["0", "0"]


def test_samples() -> None:
    text = samples_csv([ErrorEvent.no_error(), ErrorEvent.flip_at(-1), ErrorEvent.flip_at(1)], 1)
    assert text == "draw,site\n1,NONE\n2,1\n3,3\n"


def test_write_text_is_byte_stable(tmp_path: Path) -> None:
    path = write_text(path=tmp_path / "out" / "a.csv", content="a,b\n1,2\n")
    assert path.read_bytes() == b"a,b\n1,2\n"
