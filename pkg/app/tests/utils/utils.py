import numpy as np

from app.models.lattice import Row


def random_row(width: int, seed: int = 0) -> Row:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=width, dtype=np.uint8)


def random_rows(count: int, width: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(count, width), dtype=np.uint8)
