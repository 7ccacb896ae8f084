"""
Formato de texto del catálogo de gliders.

    # topdown-ca glider catalog
    ether <celdas> <tau> <deriva>
    bounds <max_width> <max_period> <seed_width>
    glider <id> <periodo> <desplazamiento> <dislocación>
    frame <patrón> <lead> <fase del éter>
    ...
    end
"""

from pathlib import Path

from pydantic import ValidationError

from app.core.exceptions import ConfigException
from app.core.logging import get_logger
from app.models.ether import Catalog, CatalogBounds, EtherTile, GliderFrame, GliderSpec

logger = get_logger(__name__)

HEADER = "# topdown-ca glider catalog"


def dump_catalog(catalog: Catalog) -> str:
    ether = catalog.ether
    bounds = catalog.bounds
    lines = [
        HEADER,
        f"ether {ether.cells} {ether.temporal_period} {ether.drift}",
        f"bounds {bounds.max_width} {bounds.max_period} {bounds.seed_width}",
    ]
    for glider in catalog.gliders:
        lines.append(f"glider {glider.id} {glider.period} {glider.displacement} {glider.dislocation}")
        lines.extend(f"frame {f.pattern} {f.lead} {f.ether_phase}" for f in glider.frames)
    lines.append("end")
    return "\n".join(lines) + "\n"


def _ints(fields: list[str], lineno: int) -> list[int]:
    try:
        return [int(field) for field in fields]
    except ValueError:
        raise ConfigException(f"catalog line {lineno}: expected integers, got {' '.join(fields)!r}")


def parse_catalog(text: str) -> Catalog:
    ether: EtherTile | None = None
    bounds = CatalogBounds()
    gliders: list[GliderSpec] = []
    pending: tuple[str, int, int, int] | None = None
    frames: list[GliderFrame] = []
    ended = False

    def flush() -> None:
        nonlocal pending, frames
        if pending is not None:
            glider_id, period, displacement, dislocation = pending
            gliders.append(
                GliderSpec(
                    id=glider_id,
                    period=period,
                    displacement=displacement,
                    dislocation=dislocation,
                    frames=tuple(frames),
                )
            )
        pending, frames = None, []

    try:
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if ended:
                raise ConfigException(f"catalog line {lineno}: content after 'end'")
            keyword, *fields = line.split()
            if keyword == "ether" and len(fields) == 3:
                tau, drift = _ints(fields[1:], lineno)
                ether = EtherTile(cells=fields[0], temporal_period=tau, drift=drift)
            elif keyword == "bounds" and len(fields) == 3:
                max_width, max_period, seed_width = _ints(fields, lineno)
                bounds = CatalogBounds(max_width=max_width, max_period=max_period, seed_width=seed_width)
            elif keyword == "glider" and len(fields) == 4:
                flush()
                period, displacement, dislocation = _ints(fields[1:], lineno)
                pending = (fields[0], period, displacement, dislocation)
            elif keyword == "frame" and len(fields) == 3:
                if pending is None:
                    raise ConfigException(f"catalog line {lineno}: frame outside a glider record")
                lead, ether_phase = _ints(fields[1:], lineno)
                frames.append(GliderFrame(pattern=fields[0], lead=lead, ether_phase=ether_phase))
            elif keyword == "end" and not fields:
                flush()
                ended = True
            else:
                raise ConfigException(f"catalog line {lineno}: cannot parse {line!r}")
        if not ended:
            raise ConfigException("catalog is truncated: missing 'end'")
        if ether is None:
            raise ConfigException("catalog has no ether line")
        return Catalog(ether=ether, bounds=bounds, gliders=tuple(gliders))
    except ValidationError as e:
        raise ConfigException(f"invalid catalog: {e.errors()[0]['msg']}")


def save_catalog(*, catalog: Catalog, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_catalog(catalog), encoding="utf-8")
    logger.info("Catalog saved", path=str(path), gliders=len(catalog.gliders))
    return path


def load_catalog(*, path: Path) -> Catalog:
    logger.debug("Loading catalog", path=str(path))
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.error("Failed to read catalog", path=str(path), error=str(e))
        raise ConfigException(f"cannot read catalog {path}: {e.strerror}")
    catalog = parse_catalog(text)
    logger.info("Catalog loaded", path=str(path), gliders=len(catalog.gliders))
    return catalog
