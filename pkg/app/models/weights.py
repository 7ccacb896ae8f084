import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from app.models.errors import ErrorEvent
from app.models.ether import UNKNOWN_PREFIX, AsymptoticState


class WeightRule(BaseModel):
    model_config = ConfigDict(frozen=True)

    variant: Literal["stability", "forcing"] = "stability"
    target: AsymptoticState | None = None

    @model_validator(mode="after")
    def _check_target(self) -> Self:
        if self.variant == "forcing":
            if self.target is None:
                raise ValueError("forcing rule needs a target state")
            if not self.target.settled:
                raise ValueError("forcing target must be a settled state")
            if any(pid.startswith(UNKNOWN_PREFIX) for pid in self.target.particles):
                raise ValueError("forcing target cannot contain unknown particles")
        elif self.target is not None:
            raise ValueError("stability rule takes no target")
        return self

    @classmethod
    def stability(cls) -> "WeightRule":
        return cls(variant="stability")

    @classmethod
    def forcing(cls, target: AsymptoticState) -> "WeightRule":
        return cls(variant="forcing", target=target)

    def __str__(self) -> str:
        if self.variant == "forcing" and self.target is not None:
            return f"forcing:{self.target.fingerprint}"
        return self.variant


class ModifiedEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    event: ErrorEvent
    state: AsymptoticState
    base_prob: float = Field(ge=0.0)
    # Guardado como real: pesos graduados son un cambio de configuración
    weight: float = Field(ge=0.0)
    prob: float = Field(ge=0.0)


class ModifiedDistribution(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: WeightRule
    normalization: float = Field(gt=0.0)
    entries: tuple[ModifiedEntry, ...]
    m: int = Field(ge=0)

    @model_validator(mode="after")
    def _normalized(self) -> Self:
        total = math.fsum(entry.prob for entry in self.entries)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"modified probabilities sum to {total!r}, not 1")
        return self

    @property
    def events(self) -> list[ErrorEvent]:
        return [entry.event for entry in self.entries]

    @property
    def per_event(self) -> dict[ErrorEvent, float]:
        return {entry.event: entry.prob for entry in self.entries}

    @property
    def per_state(self) -> dict[AsymptoticState, float]:
        masses: dict[AsymptoticState, list[float]] = {}
        for entry in self.entries:
            masses.setdefault(entry.state, []).append(entry.prob)
        return {state: math.fsum(values) for state, values in masses.items()}
