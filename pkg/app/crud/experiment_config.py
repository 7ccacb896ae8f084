"""
Lectura y escritura de configs de experimento.

Gramática: líneas `seccion.clave = valor`; `#` inicia un comentario. Las
colocaciones son `glider.<n> = <id> <posición> [<fase>]`, ordenadas por n.
"""

import hashlib
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from app.core.exceptions import ConfigException
from app.core.logging import get_logger
from app.models.experiment import ExperimentConfig

logger = get_logger(__name__)

KEYS: dict[str, tuple[str, ...]] = {
    "lattice": ("width", "steps", "fit_width"),
    "ether": ("temporal_phase",),
    "catalog": ("max_width", "max_period", "seed_width", "path"),
    "error": ("p", "m"),
    "rule": ("kind", "target"),
    "settle": ("window",),
    "output": ("dir", "format", "diagrams"),
    "run": ("seed", "jobs", "samples"),
}


def _placement(value: str, lineno: int) -> dict[str, str]:
    fields = value.split()
    if len(fields) not in (2, 3):
        raise ConfigException(f"config line {lineno}: expected '<id> <position> [<phase>]', got {value!r}")
    spec = {"glider": fields[0], "position": fields[1]}
    if len(fields) == 3:
        spec["phase"] = fields[2]
    return spec


def parse_config(text: str) -> ExperimentConfig:
    sections: dict[str, dict[str, Any]] = {}
    placements: dict[int, dict[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        section, dot, name = key.partition(".")
        if not sep or not dot or not name or not value:
            raise ConfigException(f"config line {lineno}: expected 'section.key = value', got {raw.strip()!r}")
        if section == "glider":
            try:
                order = int(name)
            except ValueError:
                raise ConfigException(f"config line {lineno}: glider key needs a number, got {key!r}")
            if order in placements:
                raise ConfigException(f"config line {lineno}: duplicate key {key!r}")
            placements[order] = _placement(value, lineno)
            continue
        if name not in KEYS.get(section, ()):
            raise ConfigException(f"config line {lineno}: unknown key {key!r}")
        if name in sections.setdefault(section, {}):
            raise ConfigException(f"config line {lineno}: duplicate key {key!r}")
        sections[section][name] = value

    if "lattice" not in sections:
        raise ConfigException("config needs lattice.width and lattice.steps")
    data: dict[str, Any] = dict(sections)
    data["gliders"] = [placements[order] for order in sorted(placements)]
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        raise ConfigException(f"invalid config ({location}): {error['msg']}")


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def serialize_config(config: ExperimentConfig) -> str:
    """Claves en orden fijo; parse_config(serialize_config(c)) == c."""
    lines: list[str] = []
    for section in ("lattice", "ether", "catalog"):
        model = getattr(config, section)
        lines.extend(
            f"{section}.{name} = {_format(getattr(model, name))}"
            for name in KEYS[section]
            if getattr(model, name) is not None
        )
    for order, placement in enumerate(config.gliders, start=1):
        lines.append(f"glider.{order} = {placement.glider} {placement.position} {placement.phase}")
    for section in ("error", "rule", "settle", "output", "run"):
        model = getattr(config, section)
        lines.extend(
            f"{section}.{name} = {_format(getattr(model, name))}"
            for name in KEYS[section]
            if getattr(model, name) is not None
        )
    return "\n".join(lines) + "\n"


def config_hash(config: ExperimentConfig) -> str:
    return hashlib.sha256(serialize_config(config).encode()).hexdigest()[:16]


def load_config(*, path: Path) -> ExperimentConfig:
    logger.debug("Loading experiment config", path=str(path))
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.error("Failed to read config", path=str(path), error=str(e))
        raise ConfigException(f"cannot read config {path}: {e.strerror}")
    config = parse_config(text)
    logger.info("Experiment config loaded", path=str(path), gliders=len(config.gliders))
    return config


def save_config(*, config: ExperimentConfig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_config(config), encoding="utf-8")
    return path
