from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit status of a CLI run."""

    OK = 0
    CHECK_FAILED = 1
    USAGE = 2


class ZpfError(Exception):
    """Base error. Carries the name of the module that raised it."""

    def __init__(self, message: str, module: str | None = None):
        super().__init__(message)
        self.module = module

    def __str__(self) -> str:
        message = super().__str__()
        if self.module:
            return f"[{self.module}] {message}"
        return message


class DomainError(ZpfError, ValueError):
    """An argument lies outside the domain of a formula."""


class PoleError(DomainError):
    """Complex Gamma evaluated at a non-positive integer."""


class NyquistViolation(ZpfError):
    """The sampling step cannot resolve a mode's instantaneous frequency."""

    def __init__(self, message: str, mode_index: int, frequency: float, module=None):
        super().__init__(message, module=module)
        self.mode_index = mode_index
        self.frequency = frequency


class StepSizeError(ZpfError):
    """Runge-Kutta local error estimate exceeded its bound."""


class NonConvergence(ZpfError):
    """Richardson extrapolation did not settle within tolerance."""


class QuadratureFailure(ZpfError):
    """Adaptive quadrature reported an unreliable result."""


class FitFailure(ZpfError):
    """Temperature fit was impossible or its residual too large."""


class UsageError(ZpfError):
    """Bad command line or configuration file."""
