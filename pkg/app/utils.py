from pathlib import Path
from typing import Any

from jinja2 import Template

TEMPLATES_DIR = Path(__file__).parent / "templates"


def render_template(*, template_name: str, context: dict[str, Any]) -> str:
    template_str = (TEMPLATES_DIR / template_name).read_text(encoding="utf-8")
    return Template(template_str, keep_trailing_newline=True).render(context)


def format_float(value: float) -> str:
    """Decimal con 17 cifras significativas: estable entre plataformas y reversible."""
    return format(value, ".17g")
