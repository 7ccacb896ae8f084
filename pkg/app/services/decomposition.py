"""
Descomposición de filas en fondo (éter) más partículas, y estados asintóticos.

Cada ventana de 14 celdas que coincide con el éter fija una alineación local.
Dos ventanas vecinas están enlazadas si continúan la misma alineación; las
rachas enlazadas de al menos MIN_ETHER_GAP celdas son fondo, y lo que queda
entre dos rachas (con ETHER_MARGIN celdas de éter a cada lado) es una
partícula. Un salto de alineación sin celdas ajenas al éter sigue siendo una
partícula: un anillo dislocado nunca se lee como éter puro.
"""

import hashlib
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from app.core.exceptions import ValidationException
from app.core.logging import LoggerMixin
from app.models.ether import (
    UNKNOWN_PREFIX,
    UNSETTLED,
    AsymptoticState,
    Catalog,
    Decomposition,
    EtherPhase,
    EtherTile,
    Particle,
)
from app.models.lattice import ETHER_MARGIN, ETHER_WIDTH, Row, SpacetimeDiagram
from app.services.ether_service import EtherIndex, build_ether_index, derive_ether
from app.services.lattice_engine import row_to_str

MIN_ETHER_GAP = 2 * ETHER_WIDTH
TURBULENCE_THRESHOLD = 0.5

# (patrón, dislocación, lead, fase del éter) de una fase de glider
LookupKey = tuple[str, int, int, int]


def fingerprint(pattern: str, dislocation: int | None, lead: int) -> str:
    digest = hashlib.blake2b(f"{dislocation}:{lead}:{pattern}".encode(), digest_size=4)
    return UNKNOWN_PREFIX + digest.hexdigest()


def same_cycle(a: tuple[str, ...], b: tuple[str, ...]) -> bool:
    """True si a es una rotación cíclica de b."""
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(a[k:] + a[:k] == b for k in range(len(a)))


class ParticleDecomposer(LoggerMixin):
    """
    Descompone filas contra el éter y (opcionalmente) un catálogo de gliders.

    Sin catálogo todas las partículas quedan como U:<huella>; así lo usa la
    búsqueda de gliders.
    """

    def __init__(
        self,
        catalog: Catalog | None = None,
        tile: EtherTile | None = None,
        min_gap: int = MIN_ETHER_GAP,
    ):
        self.catalog = catalog
        ether = catalog.ether if catalog is not None else (tile or derive_ether())
        self.index: EtherIndex = build_ether_index(ether)
        self.min_gap = min_gap
        self._lookup: dict[LookupKey, str] = {}
        self._tilings: dict[int, npt.NDArray[np.uint8]] = {}
        if catalog is not None:
            for glider in catalog.gliders:
                for frame in glider.frames:
                    key = (frame.pattern, glider.dislocation, frame.lead, frame.ether_phase)
                    owner = self._lookup.setdefault(key, glider.id)
                    if owner != glider.id:
                        raise ValidationException(
                            f"gliders {owner} and {glider.id} share the frame {frame.pattern} "
                            f"(dislocation {glider.dislocation}, lead {frame.lead})"
                        )

    def _tiling(self, width: int) -> npt.NDArray[np.uint8]:
        # Filas ordenadas por (desfase espacial, fase temporal) para el desempate
        if width not in self._tilings:
            tau = self.index.temporal_period
            self._tilings[width] = np.stack(
                [
                    self.index.tiled(width, EtherPhase(spatial_offset=s, temporal_offset=t))
                    for s in range(ETHER_WIDTH)
                    for t in range(tau)
                ]
            )
        return self._tilings[width]

    def global_phase(self, row: Row) -> EtherPhase:
        """Alineación de máxima cobertura; empate: menor desfase espacial y luego temporal."""
        matches = (self._tiling(row.shape[-1]) == row).sum(axis=1)
        best = int(np.argmax(matches))
        tau = self.index.temporal_period
        return EtherPhase(spatial_offset=best // tau, temporal_offset=best % tau)

    def links(self, row: Row) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64], npt.NDArray[np.bool_]]:
        """
        Fase temporal y desfase de la ventana en cada sitio, y si la ventana
        siguiente continúa la misma alineación del éter.
        """
        phases, offsets = self.index.locate(self.index.windows(row))
        next_phases, next_offsets = np.roll(phases, -1), np.roll(offsets, -1)
        linked = (
            (offsets >= 0)
            & (next_offsets == (offsets + 1) % ETHER_WIDTH)
            & (next_phases == phases)
        )
        return phases, offsets, linked

    def _background_runs(
        self, offsets: npt.NDArray[np.int64], linked: npt.NDArray[np.bool_]
    ) -> list[tuple[int, int]]:
        """(primera ventana, número de ventanas) de cada racha alineada de al menos min_gap celdas."""
        width = linked.size
        breaks = np.flatnonzero(~linked)
        starts = (breaks + 1) % width
        lengths = (np.roll(breaks, -1) - starts) % width + 1
        return [
            (int(start), int(length))
            for start, length in zip(starts, lengths, strict=True)
            if offsets[start] >= 0 and length + ETHER_MARGIN >= self.min_gap
        ]

    def _particle(
        self,
        row: Row,
        phases: npt.NDArray[np.int64],
        offsets: npt.NDArray[np.int64],
        last: int,
        next_start: int,
    ) -> Particle:
        """Bloque entre la última ventana de una racha y la primera de la siguiente, con sus márgenes."""
        size = row.shape[-1]
        start = (last + 1) % size
        width = (next_start - last - 1) % size + ETHER_MARGIN
        pattern = row_to_str(row[(start + np.arange(width)) % size])
        lead = int(offsets[last] + 1) % ETHER_WIDTH
        ether_phase = int(phases[last])
        dislocation: int | None = None
        if phases[next_start] == ether_phase:
            dislocation = int(width - ETHER_MARGIN + 1 + offsets[last] - offsets[next_start]) % ETHER_WIDTH
        glider_id = None
        if dislocation is not None:
            glider_id = self._lookup.get((pattern, dislocation, lead, ether_phase))
        return Particle(
            id=glider_id or fingerprint(pattern, dislocation, lead),
            start=start,
            pattern=pattern,
            lead=lead,
            ether_phase=ether_phase,
            dislocation=dislocation,
        )

    def decompose(self, row: Row) -> Decomposition:
        size = row.shape[-1]
        if size < ETHER_WIDTH:
            return Decomposition(phase=None, coverage=0.0, turbulent=True)

        phases, offsets, linked = self.links(row)
        is_ether = offsets >= 0
        covered = is_ether.copy()
        for j in range(1, ETHER_WIDTH):
            covered |= np.roll(is_ether, j)
        coverage = float(covered.mean())
        if coverage < TURBULENCE_THRESHOLD:
            return Decomposition(phase=None, coverage=coverage, turbulent=True)

        phase = self.global_phase(row)
        # Solo un éter sin saltos de alineación en todo el anillo es fondo puro
        if linked.all():
            return Decomposition(phase=phase, coverage=coverage)

        runs = self._background_runs(offsets, linked)
        if not runs:
            return Decomposition(phase=None, coverage=coverage, turbulent=True)

        particles = []
        for i, (run_start, run_length) in enumerate(runs):
            last = (run_start + run_length - 1) % size
            next_start = runs[(i + 1) % len(runs)][0]
            particles.append(self._particle(row, phases, offsets, last, next_start))

        # Corte del ciclo tras la racha de éter más larga
        longest = max(length for _, length in runs)
        candidates = [
            tuple(particles[i:] + particles[:i])
            for i, (_, length) in enumerate(runs)
            if length == longest
        ]
        ordered = min(candidates, key=lambda seq: tuple(p.id for p in seq))
        return Decomposition(phase=phase, particles=ordered, coverage=coverage)

    def asymptotic_state(self, diagram: SpacetimeDiagram, settle_window: int) -> AsymptoticState:
        """
        Recorre las filas desde el final; el estado está asentado si la lista de ids
        (todos catalogados) se mantiene durante settle_window filas consecutivas.
        """
        max_period = self.catalog.max_period if self.catalog is not None else 1
        if settle_window < 2 * max_period:
            raise ValidationException(
                f"settle window {settle_window} must be at least twice the longest glider period ({max_period})"
            )
        reference: tuple[str, ...] | None = None
        run = 0
        for t in range(diagram.steps, -1, -1):
            decomposition = self.decompose(diagram.row(t))
            if not decomposition.clean:
                break
            if reference is None:
                reference = decomposition.ids
            elif not same_cycle(decomposition.ids, reference):
                break
            run += 1
            if run >= settle_window:
                return AsymptoticState(particles=reference)
        return UNSETTLED


@lru_cache(maxsize=4)
def get_decomposer(catalog: Catalog) -> ParticleDecomposer:
    return ParticleDecomposer(catalog=catalog)


def decompose(row: Row, catalog: Catalog) -> Decomposition:
    return get_decomposer(catalog).decompose(row)


def asymptotic_state(diagram: SpacetimeDiagram, settle_window: int, catalog: Catalog) -> AsymptoticState:
    return get_decomposer(catalog).asymptotic_state(diagram, settle_window)
