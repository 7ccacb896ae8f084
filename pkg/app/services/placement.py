"""
Colocación de gliders del catálogo sobre el éter.

Cada glider desplaza el éter a su derecha en `dislocation` celdas (mod 14);
las posiciones pedidas se ajustan hacia la derecha hasta la menor que
conserva un éter continuo entre gliders vecinos.
"""

from fractions import Fraction

import numpy as np

from app.core.exceptions import ConfigException, NotFoundException, ValidationException
from app.core.logging import get_logger
from app.models.ether import Catalog, EtherPhase, GliderFrame, GliderSpec, Placement
from app.models.lattice import ETHER_WIDTH, LatticeConfig, Row, fit_width
from app.services.decomposition import MIN_ETHER_GAP
from app.services.ether_service import EtherIndex, build_ether_index, ether_row
from app.services.lattice_engine import make_row

logger = get_logger(__name__)

SELECTORS = ("fastest", "slowest")


def resolve_glider(catalog: Catalog, name: str) -> GliderSpec:
    """Id de catálogo o selector `fastest` / `slowest`; empates por orden del catálogo."""
    if name in SELECTORS:
        if not catalog.gliders:
            raise NotFoundException(f"Glider '{name}'")
        if name == "fastest":
            return max(catalog.gliders, key=lambda g: g.velocity)
        return min(catalog.gliders, key=lambda g: g.velocity)
    glider = catalog.get(name)
    if glider is None:
        raise NotFoundException(f"Glider '{name}'")
    return glider


def total_dislocation(placements: list[Placement], catalog: Catalog) -> int:
    return sum(resolve_glider(catalog, p.glider).dislocation for p in placements) % ETHER_WIDTH


def _frame(glider: GliderSpec, phase: int) -> GliderFrame:
    if not 0 <= phase < glider.period:
        raise ValidationException(
            f"phase {phase} out of range for glider {glider.id} (period {glider.period})"
        )
    return glider.frames[phase]


def resolve_placements(
    width: int, placements: list[Placement], catalog: Catalog
) -> list[Placement]:
    """
    Valida y ajusta las posiciones. Devuelve colocaciones con ids resueltos y
    posiciones efectivas; lanza ValidationException si dos gliders quedan a
    menos de MIN_ETHER_GAP celdas (incluyendo la costura periódica).
    """
    if not placements:
        return []

    dislocation = total_dislocation(placements, catalog)
    if (width - dislocation) % ETHER_WIDTH != 0:
        raise ConfigException(
            f"width {width} does not close the ether around the gliders: "
            f"need width ≡ {dislocation} (mod {ETHER_WIDTH}), e.g. {fit_width(width, dislocation)}"
        )

    positions = [p.position for p in placements]
    if positions != sorted(positions) or len(set(positions)) != len(positions):
        raise ValidationException("glider positions must increase from left to right")

    resolved: list[Placement] = []
    temporal: int | None = None
    alignment = 0
    previous_end: int | None = None
    for placement in placements:
        glider = resolve_glider(catalog, placement.glider)
        frame = _frame(glider, placement.phase)
        if temporal is None:
            temporal = frame.ether_phase
            position = placement.position
            alignment = (position - frame.lead) % ETHER_WIDTH
        else:
            if frame.ether_phase != temporal:
                raise ValidationException(
                    f"phase {placement.phase} of glider {glider.id} sits in ether phase "
                    f"{frame.ether_phase}, the first glider in {temporal}"
                )
            position = placement.position + (alignment + frame.lead - placement.position) % ETHER_WIDTH
        if previous_end is not None and position - previous_end < MIN_ETHER_GAP:
            raise ValidationException(
                f"glider {glider.id} at {position} overlaps its left neighbour "
                f"(need {MIN_ETHER_GAP} ether cells between gliders)"
            )
        if position != placement.position:
            logger.debug("Placement snapped", glider=glider.id, requested=placement.position, position=position)
        resolved.append(Placement(glider=glider.id, position=position, phase=placement.phase))
        alignment = (alignment + glider.dislocation) % ETHER_WIDTH
        previous_end = position + frame.width

    assert previous_end is not None
    if resolved[0].position + width - previous_end < MIN_ETHER_GAP:
        raise ValidationException(
            f"gliders do not fit in width {width} with {MIN_ETHER_GAP} ether cells around the seam"
        )
    return resolved


def splice(
    config: LatticeConfig | int,
    placements: list[Placement],
    catalog: Catalog,
    phase: EtherPhase | None = None,
) -> Row:
    """Fila inicial: éter con los gliders pedidos; sin gliders, éter puro con `phase`."""
    width = config if isinstance(config, int) else config.width
    resolved = resolve_placements(width, placements, catalog)
    if not resolved:
        return ether_row(width, phase, catalog.ether)

    index = build_ether_index(catalog.ether)
    gliders = [resolve_glider(catalog, p.glider) for p in resolved]
    frames = [g.frames[p.phase] for g, p in zip(gliders, resolved, strict=True)]
    temporal = frames[0].ether_phase

    row = np.zeros(width, dtype=np.uint8)
    alignment = (resolved[0].position - frames[0].lead) % ETHER_WIDTH
    for i, (placement, glider, frame) in enumerate(zip(resolved, gliders, frames, strict=True)):
        start = placement.position
        end = start + frame.width
        row[np.arange(start, end) % width] = make_row(frame.pattern)
        alignment = (alignment + glider.dislocation) % ETHER_WIDTH
        stop = resolved[i + 1].position if i + 1 < len(resolved) else resolved[0].position + width
        row[np.arange(end, stop) % width] = index.ether_cells(temporal, alignment, end, stop)
    row.flags.writeable = False
    return row


def isolated_ring(
    frame: GliderFrame, dislocation: int, index: EtherIndex, min_width: int
) -> tuple[Row, int]:
    """
    Anillo con un único bloque en la posición 0 rodeado de éter. Devuelve la
    fila y su ancho (>= min_width, congruente con la dislocación).
    """
    width = fit_width(max(min_width, frame.width + 2 * MIN_ETHER_GAP), dislocation)
    row = np.zeros(width, dtype=np.uint8)
    row[: frame.width] = make_row(frame.pattern)
    alignment = (-frame.lead + dislocation) % ETHER_WIDTH
    row[frame.width :] = index.ether_cells(frame.ether_phase, alignment, frame.width, width)
    row.flags.writeable = False
    return row, width


def will_collide(first: Placement, second: Placement, config: LatticeConfig, catalog: Catalog) -> bool:
    """True si `first` (a la izquierda) alcanza a `second` dentro de la ventana T."""
    left = resolve_glider(catalog, first.glider)
    right = resolve_glider(catalog, second.glider)
    closing = left.velocity - right.velocity
    if closing <= 0:
        return False
    gap = max(second.position - (first.position + _frame(left, first.phase).width), 0)
    return Fraction(gap) / closing < config.steps
