"""Unit conventions and fixed physical constants."""
from dataclasses import dataclass

from .errors import ConfigurationError

HBAR = 1.0

# hbar^2 / (2 m_e) in eV * Angstrom^2 (CODATA 2018: hbar c = 1973.269804 eV A,
# m_e c^2 = 510998.950 eV, giving 3.80998 -> 3.8100 to five figures).
HBAR2_OVER_2ME_EV_A2 = 3.8100
# hbar in eV * s (CODATA 2018).
HBAR_EV_S = 6.582119569e-16


@dataclass(frozen=True)
class UnitSystem:
    """Natural units with hbar fixed to one.

    Parameters
    ----------
    mass_light : float
        Mass of the light (environment) particle.
    """

    mass_light: float = 1.0

    def __post_init__(self):
        if not self.mass_light > 0:
            raise ConfigurationError("mass_light must be > 0")

    @property
    def hbar(self):
        return HBAR

    def velocity(self, p):
        return p / self.mass_light

    def strength(self, alpha_tilde):
        """Potential strength alpha from the dimensionless alpha_tilde = 2 m alpha."""
        return alpha_tilde / (2.0 * self.mass_light)
