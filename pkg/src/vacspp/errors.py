"""Exception hierarchy shared by all solver modules."""


class VacSPPError(Exception):
    """Base class for every error raised by this package."""


class DomainError(VacSPPError, ValueError):
    """Argument outside the supported range of an operation."""


class BracketError(VacSPPError, ValueError):
    """Root bracket does not enclose a sign change."""


class ConvergenceError(VacSPPError, RuntimeError):
    """Iteration or step budget exhausted before reaching tolerance."""


class SingularMediumError(VacSPPError, ZeroDivisionError):
    """Back-solving a modulated medium hit a singular instant."""


class ResonancePoleError(VacSPPError, ZeroDivisionError):
    """Dispersion formula evaluated at its pole (eps1 + eps2 = 0)."""


class DegenerateFormulaError(VacSPPError, ValueError):
    """Dispersion formula undefined (eps1 == eps2 with mu1 != mu2)."""


class PoleError(VacSPPError, ValueError):
    """Residual evaluated on a pole of the transcendental equation."""


class TrackingError(VacSPPError, RuntimeError):
    """Mode continuation across a time step jumped branches."""


class PreconditionError(VacSPPError, ValueError):
    """Inputs violate a documented precondition."""


class ConfigError(VacSPPError, ValueError):
    """Invalid scenario configuration.

    Parameters
    ----------
    field : str
        Dotted path of the offending key.
    message : str
        Human readable explanation.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
