"""Entanglement-event phase simulator with closed-form oracles.

Subpackages
-----------
scattering : conditional delta-barrier scattering of a light particle
dipole     : adiabatic two-level dipole coupled to a heavy particle
cli        : command-line harness
"""
__version__ = "0.1.0"

from .errors import (AdiabaticityError, BoundaryContaminationError, BracketError,  # noqa: F401
                     ConfigurationError, ConsistencyError, DomainError,
                     InfeasibleBalanceError, NumericOverflowError, QPhaseError,
                     QuadratureError, SeparationError, StiffnessError)
from .grid import ComplexField, Grid1D  # noqa: F401
from .ode import integrate_ode  # noqa: F401
from .propagate import spectral_step  # noqa: F401
from .quadrature import find_root, quad  # noqa: F401
from .schedule import SwitchingSchedule  # noqa: F401
from .units import UnitSystem  # noqa: F401
