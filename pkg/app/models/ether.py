from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator
from typing_extensions import Self

from app.models.lattice import ETHER_WIDTH

UNKNOWN_PREFIX = "U:"


class EtherTile(BaseModel):
    """Patrón de fondo de 14 celdas, su periodo temporal y su deriva."""

    model_config = ConfigDict(frozen=True)

    cells: str = Field(pattern=r"^[01]+$", min_length=1)
    temporal_period: int = Field(gt=0)
    # Celdas desplazadas cada temporal_period pasos (convención numpy.roll)
    drift: int

    @model_validator(mode="after")
    def _nontrivial(self) -> Self:
        if set(self.cells) != {"0", "1"}:
            raise ValueError("ether tile cannot be uniform")
        return self

    @property
    def width(self) -> int:
        return len(self.cells)


class EtherPhase(BaseModel):
    model_config = ConfigDict(frozen=True)

    spatial_offset: int = Field(default=0, ge=0, lt=ETHER_WIDTH)
    temporal_offset: int = Field(default=0, ge=0)

    @classmethod
    def canonical(cls, spatial_offset: int, temporal_offset: int, temporal_period: int) -> "EtherPhase":
        return cls(
            spatial_offset=spatial_offset % ETHER_WIDTH,
            temporal_offset=temporal_offset % temporal_period,
        )


class GliderFrame(BaseModel):
    """Una fase del glider: bloque residual, su desfase en el éter y la fase temporal del éter."""

    model_config = ConfigDict(frozen=True)

    pattern: str = Field(pattern=r"^[01]+$")
    lead: int = Field(ge=0, lt=ETHER_WIDTH)
    ether_phase: int = Field(default=0, ge=0)

    @property
    def width(self) -> int:
        return len(self.pattern)


class GliderSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    period: int = Field(gt=0)
    displacement: int
    # Desplazamiento (mod 14) del éter a la derecha respecto del de la izquierda
    dislocation: int = Field(ge=0, lt=ETHER_WIDTH)
    frames: tuple[GliderFrame, ...]

    @model_validator(mode="after")
    def _check_frames(self) -> Self:
        if len(self.frames) != self.period:
            raise ValueError(f"glider {self.id} needs {self.period} frames, got {len(self.frames)}")
        if abs(self.displacement) > self.period:
            raise ValueError(f"glider {self.id} would move faster than one cell per step")
        return self

    @property
    def velocity(self) -> Fraction:
        return Fraction(self.displacement, self.period)

    @property
    def phases(self) -> tuple[str, ...]:
        return tuple(frame.pattern for frame in self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width


class CatalogBounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_width: int = Field(default=30, gt=0)
    max_period: int = Field(default=30, gt=0)
    seed_width: int = Field(default=8, gt=0, le=16)


class Catalog(BaseModel):
    model_config = ConfigDict(frozen=True)

    ether: EtherTile
    bounds: CatalogBounds = CatalogBounds()
    gliders: tuple[GliderSpec, ...] = ()

    @model_validator(mode="after")
    def _unique_ids(self) -> Self:
        ids = [glider.id for glider in self.gliders]
        if len(ids) != len(set(ids)):
            raise ValueError("glider ids must be unique")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def v_max(self) -> float:
        if not self.gliders:
            return 0.0
        return float(max(abs(glider.velocity) for glider in self.gliders))

    @property
    def max_period(self) -> int:
        return max((glider.period for glider in self.gliders), default=1)

    def get(self, glider_id: str) -> GliderSpec | None:
        for glider in self.gliders:
            if glider.id == glider_id:
                return glider
        return None

    def ids(self) -> list[str]:
        return [glider.id for glider in self.gliders]


class Placement(BaseModel):
    model_config = ConfigDict(frozen=True)

    glider: str
    # Borde izquierdo del bloque residual
    position: int = Field(ge=0)
    phase: int = Field(default=0, ge=0)


class Particle(BaseModel):
    """Segmento no-éter encontrado al descomponer una fila."""

    model_config = ConfigDict(frozen=True)

    id: str
    start: int
    pattern: str
    lead: int
    ether_phase: int
    # None cuando el éter a cada lado está en distinta fase temporal
    dislocation: int | None

    @property
    def width(self) -> int:
        return len(self.pattern)

    @property
    def known(self) -> bool:
        return not self.id.startswith(UNKNOWN_PREFIX)


class Decomposition(BaseModel):
    model_config = ConfigDict(frozen=True)

    phase: EtherPhase | None
    particles: tuple[Particle, ...] = ()
    coverage: float
    turbulent: bool = False

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(particle.id for particle in self.particles)

    @property
    def clean(self) -> bool:
        return not self.turbulent and all(particle.known for particle in self.particles)


class AsymptoticState(BaseModel):
    """Lista ordenada (izquierda a derecha) de ids de gliders en el estado asentado."""

    model_config = ConfigDict(frozen=True)

    particles: tuple[str, ...] = ()
    settled: bool = True

    @model_validator(mode="after")
    def _unsettled_is_empty(self) -> Self:
        if not self.settled and self.particles:
            raise ValueError("UNSETTLED carries no particles")
        return self

    @property
    def fingerprint(self) -> str:
        if not self.settled:
            return "UNSETTLED"
        return "[" + ",".join(self.particles) + "]"

    @classmethod
    def from_fingerprint(cls, text: str) -> "AsymptoticState":
        text = text.strip()
        if text == "UNSETTLED":
            return UNSETTLED
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"invalid state fingerprint: {text!r}")
        body = text[1:-1].strip()
        ids = tuple(part.strip() for part in body.split(",")) if body else ()
        if any(not part for part in ids):
            raise ValueError(f"invalid state fingerprint: {text!r}")
        return cls(particles=ids)

    @property
    def count(self) -> int:
        return len(self.particles)

    def __str__(self) -> str:
        return self.fingerprint


UNSETTLED = AsymptoticState(particles=(), settled=False)
