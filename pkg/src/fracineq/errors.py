"""Exception hierarchy shared by every fracineq module."""


class FracIneqError(Exception):
    """Base class for all errors raised by fracineq."""


class DomainError(FracIneqError, ValueError):
    """An argument lies outside the domain an operation supports."""


class PoleError(DomainError):
    """The requested value sits on a pole of the function."""


class ConvergenceError(FracIneqError, ArithmeticError):
    """An iterative computation ran out of budget.

    The best partial value is kept on ``partial`` so callers can still
    inspect it.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EvaluationError(FracIneqError, ArithmeticError):
    """A user-supplied evaluator returned a non-finite value."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class CapabilityError(FracIneqError):
    """A function lacks a derivative evaluator an operation needs."""


class PreconditionError(FracIneqError):
    """A documented precondition (e.g. certification) is not met."""


class ConfigError(FracIneqError):
    """A sweep configuration is malformed or references unknown ids."""

    def __init__(self, message, line=None, field=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
        self.field = field
