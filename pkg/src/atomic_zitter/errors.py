"""Exceptions and warnings raised by the simulator modules.

Every error carries the name of the module that raised it so the command line
can report where a precondition was violated.
"""
from typing import Optional


class ZitterError(Exception):
    """Base class for all simulator errors."""

    module: str = "atomic_zitter"

    def __init__(self, message: str, module: Optional[str] = None):
        super().__init__(message)
        self.message = message
        if module is not None:
            self.module = module

    def __str__(self) -> str:
        return f"[{self.module}] {self.message}"


class InvalidBoundsError(ZitterError, ValueError):
    """Grid bounds or node count are not usable."""

    module = "core"


class PreconditionError(ZitterError, ValueError):
    """An input violates the documented precondition of an operation."""


class TruncationError(ZitterError):
    """The momentum grid cuts off a noticeable part of the Gaussian."""

    module = "core"


class NormalizationError(ZitterError, ValueError):
    """An envelope or spinor is not normalised."""


class ZeroFieldError(ZitterError, ValueError):
    """All three laser couplings vanish."""

    module = "tripod"


class StepTooLargeError(ZitterError, ValueError):
    """Finite-difference step too coarse for the requested accuracy."""

    module = "tripod"


class UnsupportedRegimeError(ZitterError):
    """A closed form is evaluated outside the regime it was derived for."""


class ResolutionError(ZitterError):
    """The momentum grid does not resolve the phase of the state."""

    module = "observables"


class ConfigError(ZitterError):
    """Scenario configuration could not be loaded or validated."""

    module = "config"


class ToleranceError(ZitterError):
    """A run produced residuals outside the configured tolerances."""

    module = "review"


class AsymptoticDivergenceWarning(UserWarning):
    """An asymptotic series was truncated past its optimal order."""


class ValidityWarning(UserWarning):
    """A closed form is used outside the regime where it is accurate."""
