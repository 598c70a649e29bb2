"""Two-branch time-dependent scattering runs."""
from dataclasses import dataclass, field

import numpy as np

from .. import oracle
from ..errors import BoundaryContaminationError, ConfigurationError, NumericOverflowError
from ..grid import ComplexField
from ..propagate import CrankNicolson, absorbing_mask
from .stationary import lattice_delta_coeffs

REFLECTION_GATE = 0.01
NORM_TOL = 1e-9


def _readonly(a, dtype=None):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------- fields

def regularized_delta(grid, center, width):
    """Unit-area raised-cosine bump (1/2w)(1 + cos(pi (x-c)/w)) sampled on ``grid``.

    The samples are renormalized so the lattice sum is exactly one; a width at
    or below dx leaves a single site of height 1/dx.
    """
    x = grid.x - center
    bump = np.where(np.abs(x) < width, 0.5 / width * (1 + np.cos(np.pi * x / width)), 0.0)
    s = bump.sum() * grid.dx
    if s == 0.0:
        bump[grid.index_of(center)] = 1.0
        s = grid.dx
    return bump / s


def build_branch_potentials(model, grid=None):
    """Branch potentials V1 = alpha delta_w(x) and V2 = alpha delta_w(x - L).

    With ``barrier_L1`` set both branches also get a wall of height
    ``model.wall_height`` on every site at or beyond L1.
    """
    grid = grid or model.grid()
    v1 = model.alpha * regularized_delta(grid, 0.0, model.width)
    v2 = model.alpha * regularized_delta(grid, model.L, model.width)
    if model.barrier_L1 is not None:
        j1 = grid.index_of(model.barrier_L1)
        v1[j1:] += model.wall_height
        v2[j1:] += model.wall_height
    return v1, v2


def incident_packet(model, grid=None):
    """Normalized incident packet with intensity FWHM W, front half-max at -margin."""
    grid = grid or model.grid()
    x = grid.x
    c = -model.W / 2 - model.margin
    if model.packet_shape == "flat_top":
        q = model.packet_order
        sig = (model.W / 2) / np.log(2) ** (1.0 / q)
        env = np.exp(-0.5 * np.abs((x - c) / sig) ** q)
    else:
        s = model.W / (2 * np.sqrt(2 * np.log(2)))
        env = np.exp(-((x - c) / (2 * s)) ** 2)
    psi = env * np.exp(1j * model.p0 * x)
    return ComplexField(psi, grid).normalized()


def half_max_edges(grid, density):
    """Interpolated positions of the outermost half-maximum crossings."""
    d = np.asarray(density)
    h = 0.5 * d.max()
    above = np.nonzero(d >= h)[0]
    i, j = above[0], above[-1]
    x = grid.x
    left = x[i - 1] + (h - d[i - 1]) / (d[i] - d[i - 1]) * grid.dx
    right = x[j] + (d[j] - h) / (d[j] - d[j + 1]) * grid.dx
    return float(left), float(right)


# ---------------------------------------------------------------- results

@dataclass(frozen=True)
class ConditionalWavefunction:
    """Snapshot of both branch fields at one time."""

    phi1: ComplexField
    phi2: ComplexField
    time: float
    branch_norms: tuple

    @property
    def overlap(self):
        return self.phi1.inner(self.phi2)


@dataclass(frozen=True)
class ScatteringReport:
    """Sampled two-branch run. All arrays are read-only.

    ``t_start`` is the arrival time of the front half-maximum at x = 0 and
    ``T = W_eff / v0`` with W_eff the measured intensity FWHM.
    """

    times: np.ndarray
    overlap: np.ndarray
    private_potential: np.ndarray
    mean_potential_1: np.ndarray
    mean_potential_2: np.ndarray
    momentum_transfer_1: np.ndarray
    momentum_transfer_2: np.ndarray
    norm_drift: tuple
    absorbed_probability: float
    W_eff: float
    T: float
    t_start: float
    lag_samples: int
    model: object = field(repr=False)
    reflection_gate: dict = field(default_factory=dict)
    snapshots: tuple = ()
    backend: str = ""

    def __post_init__(self):
        for name in ("times", "overlap", "private_potential", "mean_potential_1",
                     "mean_potential_2", "momentum_transfer_1", "momentum_transfer_2"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))

    @property
    def unwrapped_phase(self):
        return np.unwrap(np.angle(self.overlap))

    @property
    def final_phase(self):
        """arg D(t_final) in [0, 2 pi)."""
        return float(np.mod(np.angle(self.overlap[-1]), 2 * np.pi))

    @property
    def final_overlap(self):
        return complex(self.overlap[-1])

    @property
    def momentum_transfer(self):
        """Branch-averaged momentum given to the heavy particle."""
        return 0.5 * (self.momentum_transfer_1 + self.momentum_transfer_2)

    @property
    def force_path_integral(self):
        """Virtual work L * (total impulse), the impulse being uniform over [0, L]."""
        return float(self.model.L * self.momentum_transfer_1[-1])

    def oracle_overlap(self):
        m = self.model
        return oracle.ramp_overlap_extended(self.W_eff, m.v0, m.p0, m.L, self.times - self.t_start)

    def ramp_error(self):
        """Sup-norm distance between D(t) and the ideal linear ramp."""
        return float(np.max(np.abs(self.overlap - self.oracle_overlap())))

    def potential_cancellation(self):
        """Largest |<V>_1 - <V>_2| at equal times and at delay-matched times."""
        v1, v2, k = self.mean_potential_1, self.mean_potential_2, self.lag_samples
        same = float(np.max(np.abs(v1 - v2)))
        matched = float(np.max(np.abs(v1[:len(v1) - k] - v2[k:]))) if k else same
        return {"same_time": same, "delay_matched": matched,
                "peak": float(max(v1.max(), v2.max()))}

    @property
    def phase_uncertainty(self):
        from .analysis import phase_uncertainty_series
        return phase_uncertainty_series(self)


# ---------------------------------------------------------------- runner

def _mean_momentum(psi, dx):
    return float(np.sum(np.real(np.conj(psi[1:-1]) * (-1j) * (psi[2:] - psi[:-2]))) * 0.5)


def reflection_gate(model):
    """Lattice reflection amplitude of the regularized barrier vs the closed form at p0."""
    grid = model.grid()
    v1, _ = build_branch_potentials(model.with_(barrier_L1=None), grid)
    lat = lattice_delta_coeffs(v1, grid.x, model.p0, model.mass)
    ref = oracle.delta_coeffs(model.alpha_tilde, model.p0)
    rel_A = abs(lat.A - ref.A) / abs(ref.A)
    rel_B = abs(lat.B - ref.B) / abs(ref.B)
    return {"A_lattice": lat.A, "A_oracle": ref.A, "rel_err_A": rel_A, "rel_err_B": rel_B,
            "passed": bool(max(rel_A, rel_B) <= REFLECTION_GATE)}


def run_scattering(model, t_final=None, sample_every=None, snapshot_times=(), backend=None,
                   check_reflection=True):
    """Propagate both conditional branches and record the overlap D(t).

    Parameters
    ----------
    model : ScatteringModel
    t_final : float, optional
        Defaults to ``model.default_t_final``; must exceed the nominal event end.
    sample_every : int, optional
        Override of ``model.sample_every``.
    snapshot_times : sequence of float
        Sample times at which full ConditionalWavefunction snapshots are kept.
    backend : {"numba", "numpy"}, optional
    check_reflection : bool
        Refuse to run when the lattice barrier misses the closed-form
        reflection amplitude by more than 1%.

    Returns
    -------
    ScatteringReport

    Raises
    ------
    BoundaryContaminationError
        When more than 1% of a branch reaches the absorbing layers.
    NumericOverflowError
        When the norm drifts by more than 1e-9 or values turn non-finite.
    """
    grid = model.grid()
    gate = reflection_gate(model) if check_reflection else {}
    if gate and not gate["passed"]:
        raise ConfigurationError(
            f"regularized barrier misses the closed-form reflection by "
            f"{max(gate['rel_err_A'], gate['rel_err_B']):.3%}; refine the lattice")
    t_final = model.default_t_final if t_final is None else float(t_final)
    if t_final < (model.margin + model.W) / model.v0:
        raise ConfigurationError("t_final must cover the whole entanglement event")
    every = int(sample_every or model.sample_every)
    if model.steps_per_L % every:
        raise ConfigurationError("sample_every must divide the steps per L/v0")
    dt, dx = model.dt, grid.dx
    nsamples = int(np.floor(t_final / (dt * every) + 1e-9)) + 1

    v1, v2 = build_branch_potentials(model, grid)
    mask = absorbing_mask(grid, dt, model.absorb_fraction)
    prop1 = CrankNicolson(grid, v1, dt, model.mass, mask, backend)
    prop2 = CrankNicolson(grid, v2, dt, model.mass, mask, backend)

    psi0 = incident_packet(model, grid)
    lo, hi = half_max_edges(grid, np.abs(psi0.values) ** 2)
    W_eff = hi - lo
    t_start = -hi / model.v0
    p_init = _mean_momentum(psi0.values, dx)

    s1 = np.nonzero(v1 != 0.0)[0]
    s2 = np.nonzero(v2 != 0.0)[0]
    d1, d2 = model.alpha * regularized_delta(grid, 0.0, model.width), \
        model.alpha * regularized_delta(grid, model.L, model.width)
    b1, b2 = np.nonzero(d1)[0], np.nonzero(d2)[0]
    d1, d2 = d1[b1], d2[b2]

    phi1 = psi0.values.copy()
    phi2 = psi0.values.copy()
    out = {k: np.empty(nsamples, dtype=complex if k in ("D", "P") else float)
           for k in ("t", "D", "P", "V1", "V2", "p1", "p2")}
    lost1 = lost2 = 0.0
    snaps = []
    want = sorted(snapshot_times)
    for i in range(nsamples):
        if i:
            lost1 += prop1.advance(phi1, every)
            lost2 += prop2.advance(phi2, every)
        t = i * every * dt
        out["t"][i] = t
        out["D"][i] = np.vdot(phi1, phi2) * dx
        a = np.sum(np.conj(phi1[b1]) * d1 * phi2[b1]) * dx
        b = np.sum(np.conj(phi1[b2]) * d2 * phi2[b2]) * dx
        out["P"][i] = 1j * (a - b)
        out["V1"][i] = float(np.sum(np.abs(phi1[s1]) ** 2 * v1[s1]) * dx)
        out["V2"][i] = float(np.sum(np.abs(phi2[s2]) ** 2 * v2[s2]) * dx)
        out["p1"][i] = p_init - _mean_momentum(phi1, dx)
        out["p2"][i] = p_init - _mean_momentum(phi2, dx)
        while want and want[0] <= t + 0.5 * every * dt:
            want.pop(0)
            n1 = float(np.sum(np.abs(phi1) ** 2) * dx)
            n2 = float(np.sum(np.abs(phi2) ** 2) * dx)
            snaps.append(ConditionalWavefunction(ComplexField(phi1, grid), ComplexField(phi2, grid),
                                                 t, (n1, n2)))
        if max(lost1, lost2) > 0.01:
            raise BoundaryContaminationError(
                f"absorbed probability {max(lost1, lost2):.3g} > 1% at t={t:.4g}; enlarge the grid")

    n1 = float(np.sum(np.abs(phi1) ** 2) * dx)
    n2 = float(np.sum(np.abs(phi2) ** 2) * dx)
    drift = (n1 + lost1 - 1.0, n2 + lost2 - 1.0)
    if not np.all(np.isfinite(out["D"])) or max(abs(drift[0]), abs(drift[1])) > NORM_TOL:
        raise NumericOverflowError(f"norm drift {drift} exceeds {NORM_TOL}")
    return ScatteringReport(
        times=out["t"], overlap=out["D"], private_potential=out["P"],
        mean_potential_1=out["V1"], mean_potential_2=out["V2"],
        momentum_transfer_1=out["p1"], momentum_transfer_2=out["p2"],
        norm_drift=drift, absorbed_probability=float(max(lost1, lost2)),
        W_eff=float(W_eff), T=float(W_eff / model.v0), t_start=float(t_start),
        lag_samples=model.steps_per_L // every, model=model, reflection_gate=gate,
        snapshots=tuple(snaps), backend=prop1.backend)
