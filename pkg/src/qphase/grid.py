"""Uniform 1D grids and immutable complex fields."""
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, NumericOverflowError


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid1D:
    """Periodic-compatible uniform grid with ``n_points`` cells on [x_min, x_max).

    Parameters
    ----------
    x_min, x_max : float
        Domain ends; the last sample sits one spacing short of ``x_max``.
    n_points : int
        Power of two, at least 16.
    """

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        n = int(self.n_points)
        if n < 16 or n & (n - 1):
            raise ConfigurationError(f"n_points must be a power of two >= 16, got {n}")
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max) and self.x_max > self.x_min):
            raise ConfigurationError("grid needs finite x_min < x_max")
        object.__setattr__(self, "n_points", n)

    @classmethod
    def anchored(cls, dx, n_points, origin_index):
        """Grid of spacing ``dx`` whose sample ``origin_index`` is exactly x = 0."""
        x_min = -origin_index * dx
        return cls(x_min, x_min + n_points * dx, n_points)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.n_points

    @property
    def x(self):
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self):
        """Angular wavenumbers in FFT order, spanning [-pi/dx, pi/dx)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, self.dx)

    def index_of(self, x0):
        """Nearest sample index to ``x0``."""
        return int(round((x0 - self.x_min) / self.dx))

    def same_as(self, other):
        return (self.n_points == other.n_points and np.isclose(self.x_min, other.x_min)
                and np.isclose(self.x_max, other.x_max))


@dataclass(frozen=True)
class ComplexField:
    """Complex amplitudes on a grid. The stored array is read-only."""

    values: np.ndarray
    grid: Grid1D = field(compare=False)

    def __post_init__(self):
        v = _frozen(self.values, np.complex128)
        if v.shape != (self.grid.n_points,):
            raise ConfigurationError(
                f"field has shape {v.shape}, grid expects ({self.grid.n_points},)")
        if not np.all(np.isfinite(v)):
            raise NumericOverflowError("field contains non-finite values")
        object.__setattr__(self, "values", v)

    @property
    def norm2(self):
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx)

    def normalized(self):
        return ComplexField(self.values / np.sqrt(self.norm2), self.grid)

    def inner(self, other):
        """<self|other> with the grid measure."""
        return complex(np.vdot(self.values, other.values) * self.grid.dx)
