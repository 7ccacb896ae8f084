"""
Escritores CSV de tablas de resultados, distribuciones modificadas y muestras.

Separador de línea "\n" y reales con 17 cifras significativas para que los
archivos sean idénticos byte a byte entre corridas y plataformas.
"""

import csv
import io
from collections.abc import Iterable, Sequence
from pathlib import Path

from app.core.logging import get_logger
from app.models.errors import ErrorEvent, OutcomeTable
from app.models.weights import ModifiedDistribution
from app.utils import format_float

logger = get_logger(__name__)

OUTCOME_COLUMNS = ("site", "base_prob", "state_fingerprint", "changed", "settled")
MODIFIED_COLUMNS = ("event", "base_prob", "weight", "modified_prob")
SAMPLE_COLUMNS = ("draw", "site")


def _csv(header: Sequence[str], rows: Iterable[Sequence[str]], preamble: str = "") -> str:
    buffer = io.StringIO()
    buffer.write(preamble)
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def outcomes_csv(table: OutcomeTable) -> str:
    m = table.model.m
    return _csv(
        OUTCOME_COLUMNS,
        (
            (
                entry.event.site_label(m),
                format_float(entry.base_prob),
                entry.state.fingerprint,
                str(int(table.changed(entry))),
                str(int(entry.state.settled)),
            )
            for entry in table.entries
        ),
    )


def modified_csv(distribution: ModifiedDistribution, config_hash: str) -> str:
    preamble = (
        f"# rule={distribution.rule} "
        f"normalization={format_float(distribution.normalization)} "
        f"config={config_hash}\n"
    )
    return _csv(
        MODIFIED_COLUMNS,
        (
            (
                entry.event.site_label(distribution.m),
                format_float(entry.base_prob),
                format_float(entry.weight),
                format_float(entry.prob),
            )
            for entry in distribution.entries
        ),
        preamble,
    )


def samples_csv(events: Sequence[ErrorEvent], m: int) -> str:
    return _csv(SAMPLE_COLUMNS, ((str(i), event.site_label(m)) for i, event in enumerate(events, start=1)))


def write_text(*, path: Path, content: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # newline="" evita la traducción de fin de línea en Windows
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(content)
    logger.info("Output written", path=str(path), size=len(content))
    return path
