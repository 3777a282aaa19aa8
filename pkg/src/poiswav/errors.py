"""Exception hierarchy shared across the library.

Two families, chosen so the CLI can map failures to distinct exit codes:
``ValueError`` subclasses mean the *request* was bad (invalid context or
argument), ``ArithmeticError`` subclasses mean the computation could not be
carried out to the requested accuracy.
"""


class InvalidContextError(ValueError):
    """Sphere dimension / Gegenbauer order outside the supported range."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class TruncationError(ArithmeticError):
    """A series could not reach the requested tolerance before the term cap."""

    def __init__(self, message, suggested_l_max=None):
        super().__init__(message)
        self.suggested_l_max = suggested_l_max


class SingularityError(ArithmeticError):
    """Evaluation point coincides (numerically) with the field source."""


class QuadratureError(ArithmeticError):
    """A quadrature rule could not be constructed or did not converge."""
