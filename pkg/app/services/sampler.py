"""
Muestreo determinista de eventos de error desde una distribución modificada.

Generador: numpy PCG64 sembrado con la semilla de 64 bits; cada extracción
es un uniforme en [0, 1) invertido sobre la CDF en el orden fijo de eventos.
En paralelo, cada tarea usa su propia semilla de SeedSequence(seed).spawn.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from app.core.exceptions import ValidationException
from app.core.logging import get_logger
from app.models.errors import ErrorEvent
from app.models.weights import ModifiedDistribution

logger = get_logger(__name__)

MAX_SEED = 2**64


def make_generator(seed: int | np.random.SeedSequence) -> np.random.Generator:
    if isinstance(seed, int) and not 0 <= seed < MAX_SEED:
        raise ValidationException(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def _draw(distribution: ModifiedDistribution, rng: np.random.Generator, n: int) -> list[ErrorEvent]:
    if n < 0:
        raise ValidationException("sample size must be non-negative")
    events = distribution.events
    cdf = np.cumsum([entry.prob for entry in distribution.entries])
    cdf /= cdf[-1]
    picks = np.searchsorted(cdf, rng.random(n), side="right")
    return [events[int(i)] for i in picks]


def sample(distribution: ModifiedDistribution, seed: int, n: int) -> list[ErrorEvent]:
    return _draw(distribution, make_generator(seed), n)


def spawn_seeds(seed: int, tasks: int) -> list[np.random.SeedSequence]:
    if not 0 <= seed < MAX_SEED:
        raise ValidationException(f"seed must be an unsigned 64-bit integer, got {seed}")
    if tasks < 1:
        raise ValidationException("tasks must be at least 1")
    return np.random.SeedSequence(seed).spawn(tasks)


def sample_parallel(distribution: ModifiedDistribution, seed: int, n: int, tasks: int) -> list[ErrorEvent]:
    """n extracciones repartidas en `tasks` flujos independientes, concatenadas en orden de tarea."""
    seeds = spawn_seeds(seed, tasks)
    sizes = [n // tasks + (1 if i < n % tasks else 0) for i in range(tasks)]
    with ThreadPoolExecutor(max_workers=tasks) as executor:
        chunks = list(
            executor.map(
                lambda job: _draw(distribution, make_generator(job[0]), job[1]),
                zip(seeds, sizes, strict=True),
            )
        )
    logger.debug("Parallel sampling finished", draws=n, tasks=tasks)
    return [event for chunk in chunks for event in chunk]
