class AppException(Exception):
    """Excepción base personalizada para la aplicación."""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class EngineException(AppException):
    """Excepción para fallos de autoverificación del motor (indica un bug)."""

    def __init__(self, detail: str = "Engine self-check failed"):
        super().__init__(detail, exit_code=1)


class ConfigException(AppException):
    """Excepción para errores de configuración."""

    def __init__(self, detail: str = "Invalid configuration"):
        super().__init__(detail, exit_code=2)


class ValidationException(AppException):
    """Excepción para errores de validación de entradas."""

    def __init__(self, detail: str = "Validation error"):
        super().__init__(detail, exit_code=2)


class NotFoundException(AppException):
    """Excepción para recursos no encontrados."""

    def __init__(self, resource: str = "Resource"):
        super().__init__(f"{resource} not found", exit_code=2)


class UnsupportedCaseException(AppException):
    """Excepción para casos que las reglas de pesos no definen."""

    def __init__(self, detail: str = "Unsupported case"):
        super().__init__(detail, exit_code=2)


class NormalizationImpossibleException(AppException):
    """Excepción cuando ningún evento con peso no nulo tiene probabilidad."""

    def __init__(self, detail: str = "Normalization impossible"):
        super().__init__(detail, exit_code=3)


class UnsettledInitialException(AppException):
    """Excepción para filas iniciales turbulentas o con partículas desconocidas."""

    def __init__(self, detail: str = "Initial row does not decompose cleanly"):
        super().__init__(detail, exit_code=4)
