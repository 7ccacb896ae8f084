"""
Motor determinista de la regla 110 sobre una retícula periódica finita.

Dos caminos: `step` es la referencia celda a celda (tabla de la regla) y
`step_packed` opera sobre palabras de 64 bits. La referencia se conserva
como oráculo de los tests.
"""

from functools import cache

import numpy as np
import numpy.typing as npt

from app.core.exceptions import EngineException, ValidationException
from app.core.logging import get_logger
from app.models.lattice import Row, SpacetimeDiagram

logger = get_logger(__name__)

RULE_NUMBER = 110
WORD_BITS = 64

# RULE_TABLE[L, C, R] -> siguiente estado de la celda central
RULE_TABLE: npt.NDArray[np.uint8] = np.unpackbits(
    np.array([RULE_NUMBER], dtype=np.uint8), bitorder="little"
).reshape(2, 2, 2)

Words = npt.NDArray[np.uint64]

_ONE = np.uint64(1)
_HIGH = np.uint64(WORD_BITS - 1)


def make_row(bits: object) -> Row:
    """Construye una fila inmutable validando que todas las celdas sean 0 o 1."""
    if isinstance(bits, str):
        bits = [int(ch) for ch in bits]
    row = np.array(bits, dtype=np.int64)
    if row.ndim != 1 or row.size == 0:
        raise ValidationException("a row must be a non-empty 1-D sequence")
    if np.any((row != 0) & (row != 1)):
        raise ValidationException("row cells must be 0 or 1")
    out = row.astype(np.uint8)
    out.flags.writeable = False
    return out


def row_to_str(row: Row) -> str:
    return "".join("1" if cell else "0" for cell in row)


def shift(row: Row, k: int) -> Row:
    """Rotación cíclica: shift(r, k)[i] == r[i - k]."""
    return np.roll(row, k, axis=-1)


def step(row: Row) -> Row:
    """Un paso de la regla 110 por consulta directa de la tabla."""
    left = np.roll(row, 1, axis=-1)
    right = np.roll(row, -1, axis=-1)
    return RULE_TABLE[left, row, right]


def _next_bit(left: int, center: int, right: int) -> int:
    # Forma booleana derivada de la tabla
    return ((~left & (center | right)) | (left & (center ^ right))) & 1


@cache
def verify_boolean_form() -> None:
    """Comprueba la forma booleana contra los 8 vecindarios antes de usar el camino empaquetado."""
    for index in range(8):
        left, center, right = (index >> 2) & 1, (index >> 1) & 1, index & 1
        expected = int(RULE_TABLE[left, center, right])
        if _next_bit(left, center, right) != expected:
            raise EngineException(
                f"packed boolean form disagrees with rule table on {left}{center}{right}"
            )
    logger.debug("Packed boolean form verified", rule=RULE_NUMBER)


def _word_count(width: int) -> int:
    return -(-width // WORD_BITS)


def _top_bit(width: int) -> np.uint64:
    return np.uint64((width - 1) % WORD_BITS)


def _last_word_mask(width: int) -> np.uint64:
    used = (width - 1) % WORD_BITS + 1
    return np.uint64((1 << used) - 1)


def pack(rows: npt.NDArray[np.uint8]) -> Words:
    """Empaqueta (..., N) celdas en (..., K) palabras; celda i en palabra i // 64, bit i % 64."""
    width = rows.shape[-1]
    padded = np.zeros(rows.shape[:-1] + (_word_count(width) * WORD_BITS,), dtype=np.uint8)
    padded[..., :width] = rows
    octets = np.ascontiguousarray(np.packbits(padded, axis=-1, bitorder="little"))
    return octets.view("<u8").astype(np.uint64)


def unpack(words: Words, width: int) -> npt.NDArray[np.uint8]:
    octets = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    return np.unpackbits(octets, axis=-1, bitorder="little")[..., :width]


def step_words(words: Words, width: int) -> Words:
    """Un paso sobre palabras empaquetadas, con el cierre periódico en los bordes de palabra."""
    top = _top_bit(width)

    # Vecino izquierdo: L[i] = c[i-1]
    carry = np.empty_like(words)
    carry[..., 1:] = words[..., :-1] >> _HIGH
    carry[..., 0] = (words[..., -1] >> top) & _ONE
    left = (words << _ONE) | carry

    # Vecino derecho: R[i] = c[i+1]
    borrow = np.zeros_like(words)
    borrow[..., :-1] = words[..., 1:] << _HIGH
    right = (words >> _ONE) | borrow
    right[..., -1] |= (words[..., 0] & _ONE) << top

    nxt = (~left & (words | right)) | (left & (words ^ right))
    nxt[..., -1] &= _last_word_mask(width)
    return nxt


def step_packed(row: Row) -> Row:
    """Igual que `step` para toda entrada, calculado con lógica de palabras."""
    verify_boolean_form()
    width = row.shape[-1]
    return unpack(step_words(pack(row), width), width)


def evolve(r0: Row, steps: int) -> SpacetimeDiagram:
    """Devuelve las T+1 filas de la evolución desde r0."""
    if steps < 0:
        raise ValidationException("steps must be non-negative")
    verify_boolean_form()
    width = r0.shape[-1]
    history = np.empty((steps + 1, _word_count(width)), dtype=np.uint64)
    history[0] = pack(r0)
    for t in range(steps):
        history[t + 1] = step_words(history[t], width)
    return SpacetimeDiagram(rows=unpack(history, width))


def evolve_final(rows: npt.NDArray[np.uint8], steps: int) -> npt.NDArray[np.uint8]:
    """Evoluciona un lote (..., N) y devuelve solo el estado final."""
    verify_boolean_form()
    width = rows.shape[-1]
    words = pack(rows)
    for _ in range(steps):
        words = step_words(words, width)
    return unpack(words, width)


def flip(row: Row, x: int) -> Row:
    """Invierte el bit del sitio x (índice de retícula 0..N-1)."""
    width = row.shape[-1]
    if not 0 <= x < width:
        raise ValidationException(f"site {x} out of range for width {width}")
    out = np.array(row, dtype=np.uint8, copy=True)
    out[x] ^= 1
    out.flags.writeable = False
    return out


def centered_site(x: int, width: int) -> int:
    """Coordenada centrada -M..M -> índice de retícula (N/2 + x) mod N."""
    return (width // 2 + x) % width


def diff(a: SpacetimeDiagram, b: SpacetimeDiagram) -> SpacetimeDiagram:
    """XOR celda a celda de dos diagramas de iguales dimensiones."""
    if a.rows.shape != b.rows.shape:
        raise ValidationException(
            f"diagram shapes differ: {a.rows.shape} vs {b.rows.shape}"
        )
    return SpacetimeDiagram(rows=np.bitwise_xor(a.rows, b.rows))


verify_boolean_form()
