"""
Tests de los diagramas PBM y ASCII.
"""

import numpy as np
import pytest

from app.core.exceptions import ValidationException
from app.models.experiment import RenderFormat, RenderSpec
from app.models.lattice import SpacetimeDiagram
from app.services.ether_service import ether_row
from app.services.lattice_engine import evolve, flip
from app.services.render import render, render_ascii, render_pbm


@pytest.mark.unit
class TestPBM:
    def test_ether_header(self) -> None:
        text = render_pbm(evolve(ether_row(14), 28))
        assert text.startswith("P1\n14 29\n")
        assert len(text.splitlines()) == 2 + 29

    def test_rows_top_to_bottom(self) -> None:
        rows = np.array([[1, 0, 0], [0, 1, 1]], dtype=np.uint8)
        assert render_pbm(SpacetimeDiagram(rows=rows)) == "P1\n3 2\n100\n011\n"

    def test_long_rows_wrap_at_70(self) -> None:
        diagram = evolve(ether_row(140), 2)
        lines = render_pbm(diagram).splitlines()
        assert lines[1] == "140 3"
        body = lines[2:]
        assert all(len(line) <= 70 for line in body)
        assert len(body) == 3 * 2
        assert "".join(body[:2]) == "".join(str(c) for c in diagram.row(0))

    def test_ether_rows_repeat_every_seven_steps(self) -> None:
        lines = render_pbm(evolve(ether_row(14), 28)).splitlines()[2:]
        assert lines[0] == lines[7] == lines[14] == lines[28]


@pytest.mark.unit
class TestASCII:
    def test_glyphs(self) -> None:
        rows = np.array([[1, 0, 1]], dtype=np.uint8)
        assert render_ascii(SpacetimeDiagram(rows=rows)) == "█·█\n"

    def test_highlight_marks_changes(self) -> None:
        base = ether_row(28)
        reference = evolve(base, 3)
        perturbed = evolve(flip(base, 10), 3)
        text = render_ascii(perturbed, reference)
        first = text.splitlines()[0]
        assert first[10] in ("▓", "░")
        assert first.count("▓") + first.count("░") == 1
        assert set(text.splitlines()[0][:9]) <= {"█", "·"}


@pytest.mark.unit
class TestRenderSpec:
    def test_pbm_highlight_is_xor(self) -> None:
        base = ether_row(28)
        reference = evolve(base, 2)
        perturbed = evolve(flip(base, 5), 2)
        text = render(perturbed, RenderSpec(format=RenderFormat.PBM, highlight=True), reference)
        assert text.splitlines()[2] == "0" * 5 + "1" + "0" * 22

    def test_highlight_needs_reference(self) -> None:
        with pytest.raises(ValidationException):
            render(evolve(ether_row(14), 2), RenderSpec(highlight=True))

    def test_suffix(self) -> None:
        assert RenderSpec(format=RenderFormat.ASCII).suffix == ".txt"
        assert RenderSpec().suffix == ".pbm"
