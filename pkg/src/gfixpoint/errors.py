"""Exception hierarchy shared by every module in the package."""


class GFixpointError(Exception):
    """Base class for all package errors."""


class DomainError(GFixpointError, ValueError):
    """A point lies outside the carrier of its space."""


class EvaluationError(GFixpointError, ArithmeticError):
    """A map or distance function produced a fault or a non-finite value."""


class ExprSyntaxError(GFixpointError, ValueError):
    def __init__(self, message: str, text: str = "", offset: int | None = None):
        self.message = message
        self.text = text
        self.offset = offset
        if offset is not None:
            message = f"{message} at offset {offset}"
        super().__init__(message)


class ArityError(GFixpointError, ValueError):
    """Tuple length disagrees with the declared arity of a map."""


class ConfigError(GFixpointError, ValueError):
    """Malformed or inconsistent problem configuration."""
