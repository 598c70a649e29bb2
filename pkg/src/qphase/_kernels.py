"""Hot loops for Crank-Nicolson propagation.

The tridiagonal solve dominates every scattering run. It is compiled with
numba when available; setting ``QPHASE_DISABLE_NUMBA=1`` (or having no numba)
selects the numpy/LAPACK path instead. Both paths implement the same update:

    (1 + i dt H / 2) psi' = (1 - i dt H / 2) psi,   psi <- mask * psi'

with H tridiagonal (constant off-diagonal) and Dirichlet ends.
"""
import os

import numpy as np
from scipy.linalg import solve_banded

_DISABLED = os.environ.get("QPHASE_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError("numba disabled by QPHASE_DISABLE_NUMBA")
    import numba
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

DEFAULT_BACKEND = "numba" if HAVE_NUMBA else "numpy"

# Amplitudes below this are set to zero. The implicit solve otherwise fills the
# far field with subnormal floats, which are an order of magnitude slower.
TINY = 1e-150


def _speed_up(func):
    """Compile with numba when it is usable, otherwise return ``func`` unchanged."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


@_speed_up
def _thomas_factor(a_off, diag):
    n = diag.shape[0]
    cp = np.empty(n, np.complex128)
    inv_den = np.empty(n, np.complex128)
    inv_den[0] = 1.0 / diag[0]
    cp[0] = a_off * inv_den[0]
    for j in range(1, n):
        inv_den[j] = 1.0 / (diag[j] - a_off * cp[j - 1])
        cp[j] = a_off * inv_den[j]
    return cp, inv_den


@_speed_up
def _cn_loop(psi, rdiag, r_off, a_off, cp, inv_den, mask, nsteps, work):
    # returns the probability removed by the mask (sum |psi|^2 (1 - mask^2), no dx)
    n = psi.shape[0]
    absorbed = 0.0
    for _ in range(nsteps):
        # explicit half step fused with the forward elimination sweep
        r = rdiag[0] * psi[0] + r_off * psi[1]
        prev = r * inv_den[0]
        work[0] = prev
        for j in range(1, n - 1):
            r = rdiag[j] * psi[j] + r_off * (psi[j - 1] + psi[j + 1])
            prev = (r - a_off * prev) * inv_den[j]
            if abs(prev.real) < TINY and abs(prev.imag) < TINY:
                prev = 0.0j
            work[j] = prev
        r = rdiag[n - 1] * psi[n - 1] + r_off * psi[n - 2]
        work[n - 1] = (r - a_off * prev) * inv_den[n - 1]
        # back substitution fused with the absorbing mask
        nxt = work[n - 1]
        for j in range(n - 1, -1, -1):
            if j < n - 1:
                nxt = work[j] - cp[j] * nxt
                if abs(nxt.real) < TINY and abs(nxt.imag) < TINY:
                    nxt = 0.0j
            m = mask[j]
            if m < 1.0:
                absorbed += (nxt.real * nxt.real + nxt.imag * nxt.imag) * (1.0 - m * m)
                psi[j] = nxt * m
            else:
                psi[j] = nxt
    return absorbed


def _cn_loop_numpy(psi, rdiag, r_off, a_off, ab, mask, nsteps):
    absorbed = 0.0
    damp = mask < 1.0
    md = mask[damp]
    for _ in range(nsteps):
        rhs = rdiag * psi
        rhs[1:] += r_off * psi[:-1]
        rhs[:-1] += r_off * psi[1:]
        psi[:] = solve_banded((1, 1), ab, rhs, overwrite_b=True, check_finite=False)
        psi[(np.abs(psi.real) < TINY) & (np.abs(psi.imag) < TINY)] = 0.0
        v = psi[damp]
        absorbed += float(np.sum((v.real ** 2 + v.imag ** 2) * (1.0 - md * md)))
        psi[damp] = v * md
    return absorbed


class TridiagonalCN:
    """Crank-Nicolson stepper for H = -(1/2m) d2/dx2 + V on a uniform lattice.

    Parameters
    ----------
    potential : ndarray
        Real potential samples.
    dx, dt : float
        Lattice spacing and time step.
    mass : float
        Particle mass.
    mask : ndarray, optional
        Per-step multiplicative absorber, 1 in the interior.
    backend : {"numba", "numpy"}, optional
        Defaults to numba when importable and not disabled.
    """

    def __init__(self, potential, dx, dt, mass=1.0, mask=None, backend=None):
        v = np.asarray(potential, dtype=float)
        n = v.shape[0]
        h0 = 1.0 / (mass * dx * dx)
        ho = -0.5 / (mass * dx * dx)
        self.backend = backend or DEFAULT_BACKEND
        if self.backend == "numba" and not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        if self.backend not in ("numba", "numpy"):
            raise ValueError(f"unknown backend {self.backend!r}")
        self.dt = float(dt)
        self.rdiag = (1.0 - 0.5j * dt * (h0 + v)).astype(np.complex128)
        self.r_off = complex(-0.5j * dt * ho)
        self.a_off = complex(0.5j * dt * ho)
        adiag = (1.0 + 0.5j * dt * (h0 + v)).astype(np.complex128)
        self.mask = np.ones(n) if mask is None else np.asarray(mask, dtype=float)
        if self.backend == "numba":
            self._cp, self._inv_den = _thomas_factor(self.a_off, adiag)
            self._work = np.empty(n, np.complex128)
        else:
            ab = np.zeros((3, n), np.complex128)
            ab[0, 1:] = self.a_off
            ab[1] = adiag
            ab[2, :-1] = self.a_off
            self._ab = ab

    def advance(self, psi, nsteps):
        """Advance ``psi`` in place by ``nsteps``; returns absorbed probability / dx."""
        if nsteps <= 0:
            return 0.0
        if self.backend == "numba":
            return float(_cn_loop(psi, self.rdiag, self.r_off, self.a_off, self._cp,
                                  self._inv_den, self.mask, int(nsteps), self._work))
        return _cn_loop_numpy(psi, self.rdiag, self.r_off, self.a_off, self._ab,
                              self.mask, int(nsteps))
