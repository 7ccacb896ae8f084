from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from app.models.errors import ErrorModel
from app.models.ether import AsymptoticState, CatalogBounds


class RenderFormat(str, Enum):
    PBM = "pbm"
    ASCII = "ascii"


class RenderSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    format: RenderFormat = RenderFormat.PBM
    # Marca las celdas que difieren de la corrida sin perturbar
    highlight: bool = False

    @property
    def suffix(self) -> str:
        return ".pbm" if self.format is RenderFormat.PBM else ".txt"


class LatticeSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    width: int = Field(gt=0)
    steps: int = Field(gt=0)
    fit_width: bool = False


class EtherSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    temporal_phase: int = Field(default=0, ge=0)


class CatalogSection(CatalogBounds):
    path: str | None = None

    @property
    def bounds(self) -> CatalogBounds:
        return CatalogBounds(max_width=self.max_width, max_period=self.max_period, seed_width=self.seed_width)


class ErrorSection(ErrorModel):
    """Claves error.*; cada una con su valor por defecto por separado."""

    p: float = Field(default=0.1, gt=0.0, lt=1.0)
    m: int = Field(default=10, ge=0)

    @property
    def model(self) -> ErrorModel:
        return ErrorModel(p=self.p, m=self.m)


class PlacementSpec(BaseModel):
    """Glider pedido en el config: id o selector (fastest / slowest)."""

    model_config = ConfigDict(frozen=True)

    glider: str = Field(min_length=1)
    position: int = Field(ge=0)
    phase: int = Field(default=0, ge=0)


class RuleSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: str = Field(default="stability", pattern=r"^(stability|forcing)$")
    # Huella "[id,id]"; los ids pueden ser selectores
    target: str | None = None

    @model_validator(mode="after")
    def _check_target(self) -> Self:
        if self.kind == "forcing":
            if self.target is None:
                raise ValueError("rule.target is required for the forcing rule")
            state = AsymptoticState.from_fingerprint(self.target)
            if not state.settled:
                raise ValueError("rule.target must be a settled state")
        elif self.target is not None:
            raise ValueError("rule.target only applies to the forcing rule")
        return self


class SettleSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    window: int = Field(default=60, gt=0)


class OutputSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    dir: str = "out"
    format: RenderFormat = RenderFormat.PBM
    diagrams: bool = False


class RunSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=0, ge=0, lt=2**64)
    jobs: int | None = Field(default=None, ge=1)
    samples: int = Field(default=10_000, ge=0)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    lattice: LatticeSection
    ether: EtherSection = EtherSection()
    catalog: CatalogSection = CatalogSection()
    gliders: tuple[PlacementSpec, ...] = ()
    error: ErrorSection = ErrorSection()
    rule: RuleSection = RuleSection()
    settle: SettleSection = SettleSection()
    output: OutputSection = OutputSection()
    run: RunSection = RunSection()

    @model_validator(mode="after")
    def _check_error_region(self) -> Self:
        if not self.lattice.fit_width and not self.error.fits(self.lattice.width):
            raise ValueError(
                f"error region of {self.error.sites} sites does not fit width {self.lattice.width}"
            )
        return self
