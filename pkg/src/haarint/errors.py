"""Exception hierarchy shared by all haarint modules."""


class HaarintError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(HaarintError, ValueError):
    """Matrix or spectrum has the wrong shape for the requested operation."""


class InputError(HaarintError, ValueError):
    """Input violates a structural requirement (e.g. skew-symmetry)."""


class DomainError(HaarintError, ValueError):
    """Parameters lie outside the domain where the quantity is defined."""


class PoleError(DomainError):
    """Argument sits on a pole of Gamma or of a hypergeometric denominator."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class NumericalError(HaarintError, ArithmeticError):
    """An iterative algorithm failed to reach its stopping criterion."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConvergenceError(NumericalError):
    """A series or partition sum did not converge within its budget."""

    def __init__(self, message, tail_estimate=None, partial=None):
        super().__init__(message, residual=tail_estimate)
        self.tail_estimate = tail_estimate
        self.partial = partial


class CapabilityError(HaarintError):
    """A supplied function cannot provide the derivative order requested."""
