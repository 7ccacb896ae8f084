import logging
import sys
from typing import Any

import structlog
from structlog.stdlib import LoggerFactory

from app.core.config import settings


def setup_logging() -> None:
    """
    Configura logging estructurado para la aplicación.

    Los logs van a stderr: stdout queda libre para diagramas y reportes.
    Las variables de contexto (ver `bind_experiment`) se agregan a cada evento.
    """
    renderer: Any = (
        structlog.dev.ConsoleRenderer(colors=False)
        if settings.ENVIRONMENT == "local"
        else structlog.processors.JSONRenderer(sort_keys=True)
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            structlog.processors.format_exc_info,
            renderer,
        ],
        context_class=dict,
        logger_factory=LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=get_log_level(),
    )


def get_log_level() -> int:
    return logging.getLevelName(settings.LOG_LEVEL)  # type: ignore[no-any-return]


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """
    Obtiene un logger estructurado.

    Args:
        name: Nombre del logger (generalmente __name__)
    """
    return structlog.get_logger(name)  # type: ignore[no-any-return]


def bind_experiment(config_hash: str, **extra: Any) -> None:
    """Etiqueta los eventos siguientes con el hash del config en curso."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(config=config_hash, **extra)


class LoggerMixin:
    """
    Mixin para agregar logging a las clases.
    """

    @property
    def logger(self) -> structlog.stdlib.BoundLogger:
        return get_logger(self.__class__.__name__)


setup_logging()
