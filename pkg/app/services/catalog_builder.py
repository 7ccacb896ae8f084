"""
Derivación del catálogo de gliders de la regla 110 sobre el éter.

Se siembran bloques cortos en el éter, se deja evolucionar el lote, y cada
partícula cosechada se aísla en su propio anillo para medir periodo y
desplazamiento. Lo que vuelve a sí mismo dentro de las cotas es un glider.
"""

from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
import numpy.typing as npt

from app.core.config import settings
from app.core.exceptions import ConfigException
from app.core.logging import LoggerMixin, get_logger
from app.crud.catalog_store import load_catalog, save_catalog
from app.models.ether import Catalog, CatalogBounds, EtherTile, GliderFrame, GliderSpec, Particle
from app.models.lattice import ETHER_MARGIN, ETHER_WIDTH
from app.services.decomposition import MIN_ETHER_GAP, ParticleDecomposer
from app.services.ether_service import (
    all_patterns,
    build_ether_index,
    derive_ether,
    signed_shift,
)
from app.services.lattice_engine import evolve_final, step
from app.services.placement import isolated_ring

logger = get_logger(__name__)

VERIFY_PERIODS = 10

FrameKey = tuple[str, int, int]


def _frame_key(frame: GliderFrame) -> FrameKey:
    return frame.pattern, frame.lead, frame.ether_phase


def _canonical_frames(frames: list[GliderFrame]) -> tuple[GliderFrame, ...]:
    """Rota la lista de fases para empezar en la menor (fase del éter, ancho, patrón, lead)."""
    first = min(
        range(len(frames)),
        key=lambda i: (frames[i].ether_phase, frames[i].width, frames[i].pattern, frames[i].lead),
    )
    return tuple(frames[first:] + frames[:first])


class GliderCatalogBuilder(LoggerMixin):
    def __init__(self, bounds: CatalogBounds | None = None, tile: EtherTile | None = None):
        self.bounds = bounds or CatalogBounds()
        self.tile = tile or derive_ether()
        self.index = build_ether_index(self.tile)
        self.decomposer = ParticleDecomposer(tile=self.tile)
        self.transient = 2 * self.bounds.max_period
        # La cota de ancho es para el núcleo; los bloques llevan sus márgenes de éter
        self.max_block_width = self.bounds.max_width + 2 * ETHER_MARGIN

    def _ring_width(self, block_width: int) -> int:
        # Los productos de una semilla no deben encontrarse a través de la costura
        needed = 2 * self.transient + block_width + 2 * MIN_ETHER_GAP
        return -(-needed // ETHER_WIDTH) * ETHER_WIDTH

    def seed_rows(self, block_width: int) -> list[npt.NDArray[np.uint8]]:
        """Todos los bloques del ancho dado, insertados y superpuestos en todas las fases del éter.

        Dos lotes de anchos distintos: inserción (dislocación = ancho del bloque) y sobrescritura.
        """
        blocks = all_patterns(block_width)
        ether_width = self._ring_width(block_width)
        inserted_batches: list[npt.NDArray[np.uint8]] = []
        overwritten_batches: list[npt.NDArray[np.uint8]] = []
        for t in range(self.tile.temporal_period):
            for cut in range(ETHER_WIDTH):
                ether = self.index.ether_cells(t, -cut, 0, ether_width)
                inserted = np.concatenate(
                    [blocks, np.broadcast_to(ether, (blocks.shape[0], ether_width))], axis=1
                )
                overwritten = np.broadcast_to(ether, (blocks.shape[0], ether_width)).copy()
                overwritten[:, :block_width] = blocks
                inserted_batches.append(inserted)
                overwritten_batches.append(overwritten)
        return [np.concatenate(inserted_batches), np.concatenate(overwritten_batches)]

    def isolate(self, particle: Particle | GliderFrame, dislocation: int) -> GliderSpec | None:
        """
        Mide periodo y desplazamiento de una partícula sola en su anillo.
        None si no vuelve a sí misma limpia dentro de las cotas.
        """
        frame0 = GliderFrame(pattern=particle.pattern, lead=particle.lead, ether_phase=particle.ether_phase)
        min_width = frame0.width + 2 * self.bounds.max_period + 2 * MIN_ETHER_GAP
        row, width = isolated_ring(frame0, dislocation, self.index, min_width)

        frames = [frame0]
        state = row
        for p in range(1, self.bounds.max_period + 1):
            state = step(state)
            decomposition = self.decomposer.decompose(state)
            if decomposition.turbulent or len(decomposition.particles) != 1:
                return None
            current = decomposition.particles[0]
            if current.width > self.max_block_width or current.dislocation != dislocation:
                return None
            frame = GliderFrame(pattern=current.pattern, lead=current.lead, ether_phase=current.ether_phase)
            if _frame_key(frame) == _frame_key(frame0):
                displacement = signed_shift(current.start, width)
                if abs(displacement) > p:
                    return None
                return GliderSpec(
                    id="",
                    period=p,
                    displacement=displacement,
                    dislocation=dislocation,
                    frames=_canonical_frames(frames),
                )
            frames.append(frame)
        return None

    def derive(self) -> Catalog:
        tried: set[tuple[str, int, int]] = set()
        found: dict[tuple[int, int, int, tuple[FrameKey, ...]], GliderSpec] = {}

        for block_width in range(1, self.bounds.seed_width + 1):
            finals = [evolve_final(batch, self.transient) for batch in self.seed_rows(block_width)]
            harvested = 0
            for row in (row for batch in finals for row in batch):
                decomposition = self.decomposer.decompose(row)
                if decomposition.turbulent:
                    continue
                for particle in decomposition.particles:
                    if particle.dislocation is None or particle.width > self.max_block_width:
                        continue
                    key = (particle.pattern, particle.dislocation, particle.lead)
                    if key in tried:
                        continue
                    tried.add(key)
                    glider = self.isolate(particle, particle.dislocation)
                    if glider is None:
                        continue
                    tried.update((frame.pattern, glider.dislocation, frame.lead) for frame in glider.frames)
                    dedup = (
                        glider.period,
                        glider.displacement,
                        glider.dislocation,
                        tuple(_frame_key(frame) for frame in glider.frames),
                    )
                    if dedup not in found:
                        found[dedup] = glider
                        harvested += 1
            self.logger.debug("Seed pass finished", block_width=block_width, new_gliders=harvested, tried=len(tried))

        verified = [g for g in found.values() if self.verify(g)]
        if len(verified) != len(found):
            self.logger.warning("Dropped gliders failing verification", dropped=len(found) - len(verified))
        ordered = sorted(
            verified,
            key=lambda g: (Fraction(g.displacement, g.period), g.period, g.width, g.frames[0].pattern),
        )
        gliders = tuple(
            glider.model_copy(update={"id": f"g{i:02d}"}) for i, glider in enumerate(ordered, start=1)
        )
        catalog = Catalog(ether=self.tile, bounds=self.bounds, gliders=gliders)
        self.logger.info(
            "Glider catalog derived",
            gliders=len(gliders),
            v_max=catalog.v_max,
            max_width=self.bounds.max_width,
            max_period=self.bounds.max_period,
        )
        return catalog

    def verify(self, glider: GliderSpec, periods: int = VERIFY_PERIODS) -> bool:
        """Evoluciona el glider aislado `periods` periodos y comprueba cada retorno."""
        frame0 = glider.frames[0]
        min_width = frame0.width + 2 * periods * glider.period + 2 * MIN_ETHER_GAP
        row, width = isolated_ring(frame0, glider.dislocation, self.index, min_width)
        state = row
        for k in range(1, periods + 1):
            state = evolve_final(state, glider.period)
            decomposition = self.decomposer.decompose(state)
            if decomposition.turbulent or len(decomposition.particles) != 1:
                return False
            current = decomposition.particles[0]
            if (current.pattern, current.lead, current.ether_phase) != _frame_key(frame0):
                return False
            if signed_shift(current.start - k * glider.displacement, width) != 0:
                return False
        return True


def verify_glider(glider: GliderSpec, tile: EtherTile | None = None, periods: int = VERIFY_PERIODS) -> bool:
    bounds = CatalogBounds(max_width=max(glider.width - 2 * ETHER_MARGIN, 1), max_period=glider.period)
    return GliderCatalogBuilder(bounds, tile).verify(glider, periods)


def cache_path(bounds: CatalogBounds) -> Path | None:
    if settings.CATALOG_CACHE_DIR is None:
        return None
    name = f"catalog-w{bounds.max_width}-p{bounds.max_period}-s{bounds.seed_width}.txt"
    return settings.CATALOG_CACHE_DIR / name


@lru_cache(maxsize=4)
def derive_catalog(bounds: CatalogBounds | None = None) -> Catalog:
    """Catálogo para las cotas dadas; usa la caché en disco cuando existe."""
    bounds = bounds or CatalogBounds()
    path = cache_path(bounds)
    if path is not None and path.exists():
        try:
            catalog = load_catalog(path=path)
            if catalog.bounds == bounds and catalog.ether == derive_ether():
                return catalog
            logger.warning("Cached catalog does not match, re-deriving", path=str(path))
        except ConfigException as e:
            logger.warning("Ignoring unreadable cached catalog", path=str(path), error=e.detail)
    catalog = GliderCatalogBuilder(bounds).derive()
    if path is not None:
        try:
            save_catalog(catalog=catalog, path=path)
        except OSError as e:
            logger.warning("Could not write catalog cache", path=str(path), error=str(e))
    return catalog
