"""Deterministic adaptive ODE integration for small complex systems."""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConfigurationError, StiffnessError


@dataclass(frozen=True)
class Trajectory:
    """Sampled ODE solution; ``y`` has shape (len(t), dim)."""

    t: np.ndarray
    y: np.ndarray
    nfev: int

    def __post_init__(self):
        for name in ("t", "y"):
            a = np.array(getattr(self, name), copy=True)
            a.setflags(write=False)
            object.__setattr__(self, name, a)


def integrate_ode(rhs, y0, t_span, tol, t_eval=None, breakpoints=(), method="DOP853"):
    """Integrate y' = rhs(t, y) with an embedded Runge-Kutta pair.

    The integration restarts at every interior breakpoint so kinks in the
    right-hand side never sit inside a step.

    Parameters
    ----------
    rhs : callable
        ``rhs(t, y) -> ndarray`` of the same shape and dtype as ``y``.
    y0 : array_like
        Initial state, complex allowed.
    t_span : (float, float)
    tol : float
        Relative and absolute tolerance, in [1e-12, 1e-4].
    t_eval : array_like, optional
        Output times inside ``t_span``; defaults to the two end points.
    breakpoints : sequence of float
        Times where ``rhs`` is not smooth.
    method : {"DOP853", "RK45"}

    Returns
    -------
    Trajectory
    """
    if not 1e-12 <= tol <= 1e-4:
        raise ConfigurationError(f"tol must lie in [1e-12, 1e-4], got {tol}")
    if method not in ("DOP853", "RK45"):
        raise ConfigurationError("method must be an explicit embedded pair (DOP853 or RK45)")
    y0 = np.atleast_1d(np.asarray(y0, dtype=complex))
    t0, t1 = float(t_span[0]), float(t_span[1])
    if t1 < t0:
        raise ConfigurationError("t_span must be increasing")
    t_eval = np.array([t0, t1] if t_eval is None else t_eval, dtype=float)
    if t_eval.size and (t_eval.min() < t0 - 1e-12 or t_eval.max() > t1 + 1e-12):
        raise ConfigurationError("t_eval outside t_span")
    if t1 == t0:
        return Trajectory(t_eval, np.repeat(y0[None, :], t_eval.size, axis=0), 0)

    edges = [t0] + sorted(b for b in set(breakpoints) if t0 < b < t1) + [t1]
    out = np.empty((t_eval.size, y0.size), dtype=complex)
    filled = np.zeros(t_eval.size, dtype=bool)
    y = y0
    nfev = 0
    for a, b in zip(edges[:-1], edges[1:]):
        sel = (t_eval >= a) & (t_eval <= b) & ~filled
        seg_eval = np.union1d(t_eval[sel], [b])
        sol = solve_ivp(rhs, (a, b), y, method=method, rtol=tol, atol=tol, t_eval=seg_eval)
        nfev += sol.nfev
        if sol.status != 0:
            raise StiffnessError(
                f"integration failed on [{a:.6g}, {b:.6g}] at t={sol.t[-1]:.6g}: {sol.message}; "
                "try a smaller switching rate or a looser tol")
        if sel.any():
            out[sel] = sol.y[:, np.searchsorted(seg_eval, t_eval[sel])].T
            filled |= sel
        y = sol.y[:, -1]
    return Trajectory(t_eval, out, nfev)
