"""Exception hierarchy shared by all evaluators."""


class LatticeGreenError(Exception):
    """Base class for every error raised by latgreen."""


class PoleError(LatticeGreenError, ValueError):
    """A gamma-type function was evaluated at one of its poles."""


class ParameterError(LatticeGreenError, ValueError):
    """Invalid hypergeometric parameters or malformed arguments."""


class ParityError(LatticeGreenError, ValueError):
    """Index combination violates the lattice's parity constraint."""


class DomainError(LatticeGreenError, ValueError):
    """Spectral parameter outside the region where a representation is valid.

    Raised for on-spectrum values, branch-cut points and series gates.
    """


class ConvergenceError(LatticeGreenError, RuntimeError):
    """A series or quadrature failed to reach its tolerance within the cap."""

    def __init__(self, message, partial=None, terms_used=0):
        super().__init__(message)
        self.partial = partial
        self.terms_used = terms_used


class FitError(LatticeGreenError, ValueError):
    """Ill-conditioned least-squares fit."""


class ConfigError(LatticeGreenError, ValueError):
    """Malformed validation configuration."""
