"""Diagramas espacio-tiempo en PBM plano (P1) o texto; el tiempo crece hacia abajo."""

import numpy as np

from app.core.exceptions import ValidationException
from app.models.experiment import RenderFormat, RenderSpec
from app.models.lattice import SpacetimeDiagram
from app.services.lattice_engine import diff

PBM_LINE = 70
ON, OFF = "█", "·"
TURNED_ON, TURNED_OFF = "▓", "░"


def render_pbm(diagram: SpacetimeDiagram) -> str:
    """Cabecera "P1", dimensiones "N T+1", filas de arriba abajo partidas a 70 caracteres; 1 = negro."""
    lines = ["P1", f"{diagram.width} {diagram.steps + 1}"]
    for row in diagram.rows:
        digits = "".join("1" if cell else "0" for cell in row)
        lines.extend(digits[i : i + PBM_LINE] for i in range(0, len(digits), PBM_LINE))
    return "\n".join(lines) + "\n"


def render_ascii(diagram: SpacetimeDiagram, reference: SpacetimeDiagram | None = None) -> str:
    if reference is None:
        glyphs = np.array([OFF, ON])[diagram.rows]
    else:
        changed = diff(diagram, reference).rows.astype(bool)
        glyphs = np.where(
            changed,
            np.array([TURNED_OFF, TURNED_ON])[diagram.rows],
            np.array([OFF, ON])[diagram.rows],
        )
    return "".join("".join(row) + "\n" for row in glyphs)


def render(
    diagram: SpacetimeDiagram, spec: RenderSpec, reference: SpacetimeDiagram | None = None
) -> str:
    """Con highlight, PBM dibuja el XOR contra la referencia y ASCII marca las celdas cambiadas."""
    if spec.highlight and reference is None:
        raise ValidationException("highlight needs the unperturbed reference diagram")
    if spec.format is RenderFormat.PBM:
        return render_pbm(diff(diagram, reference) if spec.highlight and reference is not None else diagram)
    return render_ascii(diagram, reference if spec.highlight else None)
