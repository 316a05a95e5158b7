"""Exception hierarchy shared by the numerical modules and the CLI."""


class ZladError(Exception):
    """Base class for all package errors."""


class DomainError(ZladError, ValueError):
    """Argument outside the domain where an evaluator is valid."""


class ToleranceError(ZladError):
    """Requested accuracy cannot be reached within the configured budget."""


class QuadratureError(ToleranceError):
    """Panel quadrature failed to converge or failed a validation check."""


class IllConditionedError(ZladError):
    """A zeta-ratio denominator sits too close to a zero of Z."""


class RangeError(ZladError, ValueError):
    """Evaluation point outside the range covered by a ladder table."""


class BracketError(ZladError):
    """A root bracket could not be established where one must exist."""


class WindowError(DomainError):
    """Point outside the validity window of a local spectral expansion."""


class NoCrossingError(ZladError):
    """Mean-value scan found no sign change of the shifted integrand."""


class BoundViolation(ZladError, ValueError):
    """Segment length U violates the admissible upper bound."""

    def __init__(self, message: str, u_max: float):
        super().__init__(message)
        self.u_max = u_max


class SpacingError(ZladError, ValueError):
    """Schedule widths exceed half the spacing of consecutive left ends."""


class TableFormatError(ZladError):
    """Cache file header or contents do not match the requested build."""
