"""Exception and warning types raised across the package."""

from __future__ import annotations


class WhichPathError(Exception):
    """Base class for all package errors."""


class DomainError(WhichPathError, ValueError):
    """An argument lies outside the domain of a formula."""


class ValidationError(WhichPathError, ValueError):
    """A record violates a type invariant (e.g. a non-positive wave vector)."""


class ConfigError(WhichPathError):
    """Inconsistent or missing configuration."""


class ParseError(WhichPathError):
    """Malformed input file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConvergenceError(WhichPathError):
    """Quadrature did not reach the requested tolerance.

    The best available estimate is kept on the exception so callers can
    decide whether it is good enough.
    """

    def __init__(self, message: str, best_estimate: float, error_estimate: float, evaluations: int):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class IntegrandError(WhichPathError, ArithmeticError):
    """The integrand returned a non-finite value."""

    def __init__(self, abscissa: float, value: float):
        super().__init__(f"integrand returned {value!r} at x = {abscissa!r}")
        self.abscissa = abscissa
        self.value = value


class SingularityError(WhichPathError, ArithmeticError):
    """A denominator vanished where the model expects it not to."""


class RegimeWarning(UserWarning):
    """Inputs fall outside the approximations the formulas rely on."""
