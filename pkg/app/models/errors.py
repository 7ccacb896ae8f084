import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from app.models.ether import AsymptoticState


class ErrorModel(BaseModel):
    """Ley de ruido: probabilidad p de un único error en la fila t=0, sitios -M..M."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(gt=0.0, lt=1.0)
    m: int = Field(ge=0)

    @property
    def sites(self) -> int:
        return 2 * self.m + 1

    def fits(self, width: int) -> bool:
        return self.sites <= width


class ErrorEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["NO_ERROR", "FLIP"]
    # Coordenada centrada -M..M; None para NO_ERROR
    x: int | None = None

    @model_validator(mode="after")
    def _check_site(self) -> Self:
        if (self.kind == "FLIP") != (self.x is not None):
            raise ValueError("FLIP events need a site and NO_ERROR events none")
        return self

    @classmethod
    def no_error(cls) -> "ErrorEvent":
        return cls(kind="NO_ERROR")

    @classmethod
    def flip_at(cls, x: int) -> "ErrorEvent":
        return cls(kind="FLIP", x=x)

    @property
    def is_flip(self) -> bool:
        return self.kind == "FLIP"

    def site_label(self, m: int) -> str:
        """Etiqueta de reporte: 1..2M+1 de izquierda a derecha, NONE sin error."""
        if self.x is None:
            return "NONE"
        return str(self.x + m + 1)

    def __str__(self) -> str:
        return "NO_ERROR" if self.x is None else f"FLIP_AT({self.x})"


class OutcomeEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    event: ErrorEvent
    base_prob: float = Field(ge=0.0, le=1.0)
    state: AsymptoticState


class OutcomeTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    model: ErrorModel
    initial_state: AsymptoticState
    entries: tuple[OutcomeEntry, ...]

    @model_validator(mode="after")
    def _complete(self) -> Self:
        expected = self.model.sites + 1
        if len(self.entries) != expected:
            raise ValueError(f"outcome table needs {expected} entries, got {len(self.entries)}")
        total = math.fsum(entry.base_prob for entry in self.entries)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"base probabilities sum to {total!r}, not 1")
        return self

    @property
    def events(self) -> list[ErrorEvent]:
        return [entry.event for entry in self.entries]

    @property
    def reference_state(self) -> AsymptoticState:
        """Estado de la corrida sin error (NO_ERROR es siempre la primera fila)."""
        return self.entries[0].state

    def changed(self, entry: OutcomeEntry) -> bool:
        return entry.state != self.reference_state
