"""Exception hierarchy.

Every error carries the CLI exit code it maps to, so the harness never has to
keep a second lookup table in sync.
"""


class QPhaseError(Exception):
    exit_code = 3


class ConfigurationError(QPhaseError, ValueError):
    """Invalid model, grid or config input."""
    exit_code = 2


class DomainError(ConfigurationError):
    """Argument outside the documented domain of a closed form."""


class InfeasibleBalanceError(ConfigurationError):
    """Two-dipole balance admits no real non-negative root."""


class SeparationError(ConfigurationError):
    """Heavy-particle packets overlap more than allowed."""


class BracketError(QPhaseError, ValueError):
    """No sign change on the supplied bracket."""
    exit_code = 3


class NumericOverflowError(QPhaseError, FloatingPointError):
    """Non-finite values appeared during propagation."""


class StiffnessError(QPhaseError, RuntimeError):
    """Adaptive integrator step size underflowed."""


class QuadratureError(QPhaseError, RuntimeError):
    """Adaptive quadrature did not converge.

    Attributes
    ----------
    best_estimate : float or complex
        The last estimate returned by the quadrature routine.
    """

    def __init__(self, message, best_estimate=None, abserr=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.abserr = abserr


class BoundaryContaminationError(QPhaseError, RuntimeError):
    """Too much probability reached the absorbing layer."""


class ConsistencyError(QPhaseError, RuntimeError):
    """Independent evaluations of the same quantity disagree."""
    exit_code = 4

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = dict(values or {})


class AdiabaticityError(ConsistencyError):
    """Final ground-state overlap too small for an adiabatic readout."""
