"""Dipole model: level splitting, coupling profile and switching schedule."""
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from ..errors import ConfigurationError, DomainError
from ..schedule import SwitchingSchedule


def _smoothstep(s):
    """C2 quintic step: 0 for s <= 0, 1 for s >= 1."""
    s = np.clip(s, 0.0, 1.0)
    return s * s * s * (10 - 15 * s + 6 * s * s)


def _dsmoothstep(s):
    inside = (s > 0) & (s < 1)
    s = np.clip(s, 0.0, 1.0)
    return np.where(inside, 30 * s * s * (1 - s) ** 2, 0.0)


@dataclass(frozen=True)
class SecondDipole:
    """Second polarizable dipole sharing the coupling profile."""

    alpha2: float
    beta2: float
    initial_state: str = "excited"

    def __post_init__(self):
        if self.alpha2 <= 0 or self.beta2 <= 0:
            raise ConfigurationError("alpha2 and beta2 must be > 0")
        if self.initial_state not in ("ground", "excited"):
            raise ConfigurationError("initial_state must be 'ground' or 'excited'")


@dataclass(frozen=True)
class DipoleModel:
    """Two-level dipole H = alpha sigma_1 + beta g(t) f(z) sigma_3.

    The coupling profile is Qe/z^2 (or a tabulated spline) multiplied by a
    grounded-cage mask that vanishes identically within ``cage_radius`` of z1
    and rises to one over a further ``cage_transition`` with a C2 quintic.

    Parameters
    ----------
    alpha : float
        Half-splitting of the bare dipole.
    schedule : SwitchingSchedule
    Qe : float
        Charge parameter of the power-law profile.
    beta : float
        Coupling scale of this dipole.
    z1, z2 : float
        Heavy-particle positions of the two branches; z1 sits inside the cage.
    cage_radius, cage_transition : float
    table_z, table_f : array_like, optional
        Tabulated profile used instead of Qe/z^2.
    second_dipole : SecondDipole, optional
    """

    alpha: float = 1.0
    schedule: SwitchingSchedule = field(default_factory=lambda: SwitchingSchedule(1.0, 0.02, 0.0, 10.0))
    Qe: float = 1.0
    beta: float = 1.0
    z1: float = 3.0
    z2: float = 1.0
    cage_radius: float = 0.5
    cage_transition: float = 0.5
    table_z: tuple = None
    table_f: tuple = None
    second_dipole: SecondDipole = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigurationError("alpha must be > 0")
        if self.beta <= 0 or self.Qe <= 0:
            raise ConfigurationError("beta and Qe must be > 0")
        if self.cage_radius <= 0 or self.cage_transition <= 0:
            raise ConfigurationError("cage radius and transition must be > 0")
        if (self.table_z is None) != (self.table_f is None):
            raise ConfigurationError("table_z and table_f must be given together")
        if self.table_z is not None:
            tz = tuple(float(v) for v in self.table_z)
            tf = tuple(float(v) for v in self.table_f)
            if len(tz) != len(tf) or len(tz) < 4 or np.any(np.diff(tz) <= 0):
                raise ConfigurationError("table_z must be increasing with >= 4 entries")
            object.__setattr__(self, "table_z", tz)
            object.__setattr__(self, "table_f", tf)
        elif min(self.z1, self.z2) <= 0:
            raise ConfigurationError("power-law profile needs z1, z2 > 0")
        if abs(self.z2 - self.z1) <= self.cage_radius + self.cage_transition:
            raise ConfigurationError("z2 must lie outside the cage and its transition band")
        fz2 = self.f(self.z2)
        if not fz2 > 0:
            raise ConfigurationError("f(z2) must be > 0")
        ratio = self.schedule.g0 * self.beta * fz2 / self.alpha
        if self.schedule.g0 > 0 and not 0.1 <= ratio <= 10:
            warnings.warn(f"g0 f(z2)/alpha = {ratio:.3g} is far from order one", stacklevel=2)

    # coupling profile -------------------------------------------------------

    def _mask(self, z):
        s = (np.abs(np.asarray(z, dtype=float) - self.z1) - self.cage_radius) / self.cage_transition
        return _smoothstep(s)

    def _dmask(self, z):
        z = np.asarray(z, dtype=float)
        s = (np.abs(z - self.z1) - self.cage_radius) / self.cage_transition
        return _dsmoothstep(s) * np.sign(z - self.z1) / self.cage_transition

    def _bare(self, z):
        z = np.asarray(z, dtype=float)
        if self.table_z is not None:
            return CubicSpline(self.table_z, self.table_f)(z)
        return self.Qe / z ** 2

    def _dbare(self, z):
        z = np.asarray(z, dtype=float)
        if self.table_z is not None:
            h = 1e-5 * (self.table_z[-1] - self.table_z[0])
            sp = CubicSpline(self.table_z, self.table_f)
            return (sp(z + h) - sp(z - h)) / (2 * h)
        return -2 * self.Qe / z ** 3

    def f(self, z):
        """Masked coupling profile; exactly zero at z1."""
        z = np.asarray(z, dtype=float)
        if self.table_z is None and np.any(z <= 0):
            raise DomainError("power-law profile is singular at z <= 0")
        out = self._bare(z) * self._mask(z)
        return float(out) if out.ndim == 0 else out

    def df(self, z):
        """dz f: analytic for the power law, centred differences for a table."""
        z = np.asarray(z, dtype=float)
        if self.table_z is None and np.any(z <= 0):
            raise DomainError("power-law profile is singular at z <= 0")
        out = self._dbare(z) * self._mask(z) + self._bare(z) * self._dmask(z)
        return float(out) if out.ndim == 0 else out

    def coupling(self, z):
        """beta f(z), the coefficient of g(t) sigma_3."""
        return self.beta * self.f(z)

    @property
    def profile_breakpoints(self):
        """z values where the mask derivative has kinks."""
        r, w = self.cage_radius, self.cage_transition
        return tuple(sorted((self.z1 - r - w, self.z1 - r, self.z1 + r, self.z1 + r + w)))

    @property
    def adiabaticity(self):
        return self.schedule.adiabaticity(self.alpha)

    def with_(self, **changes):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d.update(changes)
        return DipoleModel(**d)

    def with_schedule(self, **changes):
        s = self.schedule
        d = {"g0": s.g0, "eps": s.eps, "t1": s.t1, "t2": s.t2, "cutoff": s.cutoff}
        d.update(changes)
        return self.with_(schedule=SwitchingSchedule(**d))
