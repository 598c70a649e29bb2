"""Phase-uncertainty integrals I2, I3 of the Heisenberg relative-phase operator."""
import warnings
from dataclasses import dataclass

import numpy as np

from .. import oracle
from ..errors import QuadratureError, StiffnessError
from ..ode import integrate_ode


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def z_nodes(model, n_per_segment=24):
    """Gauss-Legendre nodes and signed weights for int_{z1}^{z2} dz.

    The interval is split at the kinks of the cage mask so every panel sees a
    smooth integrand.
    """
    lo, hi = sorted((model.z1, model.z2))
    edges = [lo] + [p for p in model.profile_breakpoints if lo < p < hi] + [hi]
    x, w = np.polynomial.legendre.leggauss(n_per_segment)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    sign = 1.0 if model.z2 > model.z1 else -1.0
    return np.concatenate(nodes), sign * np.concatenate(weights)


def inner_integrals(model, z, times, tol=1e-10):
    """I'_+(z, t) = int_{t1'}^{t} g cos(theta) exp(i gamma) dt' at each z node.

    gamma is carried as an ODE component next to I'_+, so one adaptive
    integration serves all nodes and all output times. I'_- is the complex
    conjugate.

    Returns
    -------
    ndarray, shape (len(times), len(z))
    """
    s = model.schedule
    a = model.alpha
    c0 = np.atleast_1d(np.asarray(model.coupling(z), dtype=float))
    n = c0.size
    times = np.atleast_1d(np.asarray(times, dtype=float))
    out = np.zeros((times.size, n), dtype=complex)
    live = times > s.t1p
    if not live.any() or s.g0 == 0.0:
        return out
    t_end = float(times[live].max())

    def rhs(t, y):
        g = s.g_scalar(t)
        omega = np.sqrt(a * a + (g * c0) ** 2)
        dy = np.empty(2 * n, dtype=complex)
        dy[:n] = omega
        dy[n:] = g * (a / omega) * np.exp(1j * y[:n].real)
        return dy

    t_eval = np.concatenate([[s.t1p], times[live]])
    order = np.argsort(t_eval, kind="stable")
    try:
        traj = integrate_ode(rhs, np.zeros(2 * n, dtype=complex), (s.t1p, t_end), tol,
                             t_eval=t_eval[order], breakpoints=s.breakpoints)
    except StiffnessError as exc:
        raise QuadratureError(f"oscillatory time integral did not converge ({exc}); "
                              "use a finer tolerance") from exc
    vals = np.empty_like(traj.y)
    vals[order] = traj.y
    out[live] = vals[1:, n:]
    return out


@dataclass(frozen=True)
class UncertaintySeries:
    """I2(t), I3(t) and the variance I2^2 + I3^2.

    Attributes
    ----------
    times, I2, I3 : ndarray
    delta_phi_sq : ndarray
        I2^2 + I3^2, the variance of the Heisenberg relative-phase operator
        in the initial dipole state.
    delta_phi : ndarray
        Its square root, the standard deviation.
    """

    times: np.ndarray
    I2: np.ndarray
    I3: np.ndarray
    delta_phi_sq: np.ndarray
    delta_phi: np.ndarray

    def __post_init__(self):
        for name in ("times", "I2", "I3", "delta_phi_sq", "delta_phi"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))


def uncertainty_integrals(model, times, tol=1e-10, n_per_segment=24):
    """Nested quadrature of I2 = -int dz f' int g cos(theta) cos(gamma) dt and I3 (sin).

    The z integral runs from z1 to z2 with Gauss-Legendre panels; the time
    integral is the vectorized ODE of :func:`inner_integrals`.

    Parameters
    ----------
    model : DipoleModel
    times : float or array_like
    tol : float
    n_per_segment : int

    Returns
    -------
    UncertaintySeries
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    z, w = z_nodes(model, n_per_segment)
    dfw = w * model.beta * np.asarray(model.df(z))
    keep = dfw != 0.0
    inner = inner_integrals(model, z[keep], times, tol)
    total = -(inner @ dfw[keep])
    i2, i3 = total.real, total.imag
    sq = i2 ** 2 + i3 ** 2
    return UncertaintySeries(times, i2, i3, sq, np.sqrt(sq))


@dataclass(frozen=True)
class StationaryPhaseCheck:
    """Quadrature vs the leading stationary-phase form at one (z, t).

    ``constant`` is rel_gap / (eps / omega), the measured O(eps/omega) prefactor.
    """

    numeric: complex
    stationary: complex
    rel_gap: float
    eps_over_omega: float

    @property
    def constant(self):
        return self.rel_gap / self.eps_over_omega


def stationary_phase_check(model, z=None, t=None, tol=1e-11):
    """Compare I'_+ from quadrature with its stationary-phase value."""
    s = model.schedule
    z = model.z2 if z is None else z
    t = 0.5 * (s.t1 + s.t2) if t is None else t
    numeric = complex(inner_integrals(model, [z], [t], tol)[0, 0])
    c = float(model.coupling(z))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        stat = oracle.stationary_phase_I(model.alpha, s, c, t)[0]
    omega = float(np.hypot(model.alpha, s.g(t) * c))
    gap = abs(numeric - stat) / abs(stat)
    return StationaryPhaseCheck(numeric, complex(stat), float(gap), s.eps / omega)
