"""Exception types shared across the package."""


class LevyDecayError(Exception):
    """Base class."""


class DomainError(LevyDecayError, ValueError):
    """Argument outside the domain of the operation."""


class QuadratureError(LevyDecayError, RuntimeError):
    """Quadrature did not reach the requested tolerance."""

    def __init__(self, message, value=float("nan"), abs_error=float("inf")):
        super().__init__(message)
        self.value = value
        self.abs_error = abs_error


class UnsupportedProfileError(LevyDecayError):
    """Operation needs an exponential-type profile (or another model class)."""


class BracketError(LevyDecayError, RuntimeError):
    """A root bracket could not be established."""


class NonIntegrableSymbolError(LevyDecayError):
    """1/(alpha + Psi) is not integrable; use the time-domain route."""


class CutoffError(LevyDecayError, RuntimeError):
    """The frequency cutoff does not make the neglected tail small."""


class InsufficientDataError(LevyDecayError, ValueError):
    """Too few usable points for a fit or report."""
