from dataclasses import dataclass
from fractions import Fraction
from math import floor

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

ETHER_WIDTH = 14
# Celdas de éter que un bloque de glider lleva a cada lado
ETHER_MARGIN = ETHER_WIDTH - 1

# Una fila es un vector uint8 de 0/1, índice 0..N-1, periódico
Row = npt.NDArray[np.uint8]


class LatticeConfig(BaseModel):
    """Ancho N y ventana T de una retícula periódica finita."""

    model_config = ConfigDict(frozen=True)

    width: int = Field(gt=0)
    steps: int = Field(gt=0)
    # Dislocación total (mod 14) de los gliders colocados; 0 para éter puro
    dislocation: int = Field(default=0, ge=0, lt=ETHER_WIDTH)
    # Velocidad máxima del catálogo en celdas/paso
    v_max: float = Field(default=1.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_tiling(self) -> Self:
        if (self.width - self.dislocation) % ETHER_WIDTH != 0:
            raise ValueError(
                f"width {self.width} does not close the ether: "
                f"need width ≡ {self.dislocation} (mod {ETHER_WIDTH})"
            )
        return self

    @model_validator(mode="after")
    def _check_window(self) -> Self:
        if self.steps > self.max_steps:
            raise ValueError(
                f"window of {self.steps} steps exceeds floor(N / (2 v_max)) = {self.max_steps}"
            )
        return self

    @property
    def max_steps(self) -> int:
        if self.v_max == 0:
            return self.width
        speed = Fraction(self.v_max).limit_denominator(10_000)
        return floor(Fraction(self.width) / (2 * speed))

    @property
    def center(self) -> int:
        return self.width // 2


def fit_width(min_width: int, dislocation: int = 0) -> int:
    """Ancho mínimo >= min_width en el que el éter cierra alrededor de los gliders."""
    remainder = (min_width - dislocation) % ETHER_WIDTH
    return min_width if remainder == 0 else min_width + ETHER_WIDTH - remainder


@dataclass(frozen=True)
class SpacetimeDiagram:
    """Filas 0..T de una evolución; la fila t es el estado en el tiempo t."""

    rows: npt.NDArray[np.uint8]

    def __post_init__(self) -> None:
        if self.rows.ndim != 2:
            raise ValueError("diagram rows must be a 2-D array")
        self.rows.flags.writeable = False

    @property
    def width(self) -> int:
        return int(self.rows.shape[1])

    @property
    def steps(self) -> int:
        return int(self.rows.shape[0]) - 1

    def row(self, t: int) -> Row:
        return self.rows[t]

    @property
    def final(self) -> Row:
        return self.rows[-1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpacetimeDiagram):
            return NotImplemented
        return self.rows.shape == other.rows.shape and bool(
            np.array_equal(self.rows, other.rows)
        )

    __hash__ = None  # type: ignore[assignment]
