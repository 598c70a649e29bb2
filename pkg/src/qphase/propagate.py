"""Wave propagation primitives: split-step Fourier and Crank-Nicolson."""
import numpy as np

from ._kernels import TridiagonalCN
from .errors import ConfigurationError, NumericOverflowError
from .grid import ComplexField


def _check_potential(field, potential):
    v = np.asarray(potential, dtype=float)
    if v.shape != (field.grid.n_points,):
        raise ConfigurationError(
            f"potential has shape {v.shape}, grid expects ({field.grid.n_points},)")
    if not np.all(np.isfinite(v)):
        raise NumericOverflowError("potential contains non-finite values")
    return v


def spectral_step(field, potential, dt, mass=1.0):
    """One symmetric split step exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2).

    Parameters
    ----------
    field : ComplexField
    potential : array_like
        Real potential on ``field.grid``.
    dt : float
        Non-negative time step; ``dt == 0`` returns the input unchanged.

    Returns
    -------
    ComplexField
    """
    if dt < 0:
        raise ConfigurationError("dt must be >= 0")
    v = _check_potential(field, potential)
    if dt == 0:
        return field
    half = np.exp(-0.5j * dt * v)
    kin = np.exp(-0.5j * dt * field.grid.k ** 2 / mass)
    psi = half * np.fft.ifft(kin * np.fft.fft(half * field.values))
    if not np.all(np.isfinite(psi)):
        raise NumericOverflowError("split step produced non-finite values")
    return ComplexField(psi, field.grid)


def free_evolve(field, t, mass=1.0):
    """Exact periodic free evolution over time ``t`` (continuum dispersion)."""
    kin = np.exp(-0.5j * t * field.grid.k ** 2 / mass)
    return ComplexField(np.fft.ifft(kin * np.fft.fft(field.values)), field.grid)


def absorbing_mask(grid, dt, fraction=0.1, strength=2.0):
    """Per-step damping factor exp(-gamma(x) dt) with a sin^2 ramp in each end layer.

    The complement 1 - gamma/strength is the cos^2 profile; the layer covers
    ``fraction`` of the domain at each end.
    """
    if not 0.1 <= fraction < 0.5:
        raise ConfigurationError("absorbing layer must cover at least 10% of the domain")
    n = grid.n_points
    width = fraction * n
    j = np.arange(n, dtype=float)
    depth = np.maximum(width - j, 0.0) + np.maximum(j - (n - 1 - width), 0.0)
    s = np.clip(depth / width, 0.0, 1.0)
    gamma = strength * np.sin(0.5 * np.pi * s) ** 2
    return np.exp(-gamma * dt)


class CrankNicolson:
    """Crank-Nicolson propagator on a Grid1D with a fixed potential.

    Second order in dt and dx, unconditionally stable and unitary up to the
    absorbing mask. ``advance`` returns absorbed probability (grid measure).
    """

    def __init__(self, grid, potential, dt, mass=1.0, mask=None, backend=None):
        self.grid = grid
        self.dt = float(dt)
        self._tri = TridiagonalCN(potential, grid.dx, dt, mass=mass, mask=mask, backend=backend)

    @property
    def backend(self):
        return self._tri.backend

    def advance(self, psi, nsteps):
        lost = self._tri.advance(psi, nsteps) * self.grid.dx
        if not np.isfinite(lost) or not np.all(np.isfinite(psi)):
            raise NumericOverflowError("Crank-Nicolson step produced non-finite values")
        return lost
