import math
import warnings

import numpy as np
import pytest

from qphase import oracle
from qphase.errors import (BoundaryContaminationError, ConfigurationError, SeparationError)
from qphase.scattering import (ScatteringModel, barrier_variant_phase, build_branch_potentials,
                               displacement_expectation, incident_packet,
                               momentum_transfer_and_path_integral, phase_gradient_check,
                               public_potential_probe, run_scattering)
from qphase.scattering.analysis import (HeavySuperposition, phase_uncertainty_series,
                                        private_potential_consistency)
from qphase.scattering.engine import half_max_edges, reflection_gate, regularized_delta
from qphase.scattering.stationary import (continuum_delta_coeffs, delta_width_study,
                                          lattice_delta_coeffs)


# ---------------------------------------------------------------- model

def test_model_defaults_and_lattice():
    m = ScatteringModel()
    assert m.alpha == pytest.approx(100.0)
    assert m.dx == pytest.approx(1 / 64)
    assert (m.L / m.v0) / m.dt == pytest.approx(m.steps_per_L)
    g = m.grid()
    assert g.x[g.index_of(0.0)] == pytest.approx(0.0, abs=1e-12)
    assert g.x[g.index_of(1.0)] == pytest.approx(1.0, abs=1e-12)


def test_model_validation():
    with pytest.raises(ConfigurationError, match="W >= 10L"):
        ScatteringModel(W=5.0)
    with pytest.warns(UserWarning):
        ScatteringModel(W=5.0, allow_narrow=True)
    with pytest.raises(ConfigurationError):
        ScatteringModel(barrier_L1=1.5)
    with pytest.raises(ConfigurationError):
        ScatteringModel(barrier_L1=0.3)  # not a lattice site
    with pytest.raises(ConfigurationError):
        ScatteringModel(delta_width=0.5)
    with pytest.raises(ConfigurationError):
        ScatteringModel(sample_every=7)


def test_refined_halves_steps():
    m = ScatteringModel()
    r = m.refined()
    assert r.dx == pytest.approx(m.dx / 2)
    assert r.dt == pytest.approx(m.dt / 2)


# ---------------------------------------------------------------- stationary scattering

def test_regularized_delta_unit_area():
    m = ScatteringModel()
    g = m.grid()
    d = regularized_delta(g, 0.0, m.width)
    assert np.sum(d) * g.dx == pytest.approx(1.0)
    assert np.count_nonzero(d) == 1
    wide = regularized_delta(g, 0.0, 0.1)
    assert np.sum(wide) * g.dx == pytest.approx(1.0)


@pytest.mark.parametrize("alpha_tilde", [50.0, 200.0])
def test_lattice_barrier_matches_closed_form(alpha_tilde):
    m = ScatteringModel(alpha_tilde=alpha_tilde, p0=1.0)
    g = m.grid()
    v1, _ = build_branch_potentials(m, g)
    lat = lattice_delta_coeffs(v1, g.x, 1.0)
    ref = oracle.delta_coeffs(alpha_tilde, 1.0)
    assert abs(lat.A - ref.A) / abs(ref.A) < 1e-3
    assert abs(lat.B - ref.B) / abs(ref.B) < 1e-3
    assert lat.unitarity_defect < 1e-12


def test_continuum_width_convergence_is_first_order():
    study = delta_width_study(200.0, 1.0, 5e-4, levels=3)
    assert study["order"] == pytest.approx(1.0, abs=0.1)
    assert study["rel_err_B"][-1] < 0.01
    c = continuum_delta_coeffs(50.0, 1.0, 1.25e-4)
    assert c.unitarity_defect < 1e-8


def test_reflection_gate_passes_default():
    assert reflection_gate(ScatteringModel())["passed"]


# ---------------------------------------------------------------- packet

def test_packet_fwhm_and_front():
    m = ScatteringModel()
    psi = incident_packet(m)
    lo, hi = half_max_edges(psi.grid, np.abs(psi.values) ** 2)
    assert hi - lo == pytest.approx(m.W, rel=1e-3)
    assert hi == pytest.approx(-m.margin, abs=0.05)
    assert psi.norm2 == pytest.approx(1.0)


# ---------------------------------------------------------------- runs

def test_small_run_invariants(small_scatter_run, small_scatter_model):
    rep = small_scatter_run
    assert max(abs(d) for d in rep.norm_drift) < 1e-9
    assert np.all(np.abs(rep.overlap) <= 1 + 1e-12)
    assert rep.overlap[0] == pytest.approx(1.0, abs=1e-12)
    assert abs(math.remainder(rep.final_phase - math.pi, 2 * math.pi)) < 0.05
    assert rep.absorbed_probability < 0.01
    assert rep.lag_samples == small_scatter_model.steps_per_L // small_scatter_model.sample_every
    with pytest.raises(ValueError):
        rep.overlap[0] = 0


def test_private_potential_is_derivative_of_overlap(small_scatter_run):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pc = private_potential_consistency(small_scatter_run)
    # the narrow packet has sharp ramp corners, so the central difference is coarse here;
    # the full-size bound is checked by the acceptance suite
    assert pc["max_abs_gap"] < 5e-3


def test_snapshot_overlap_matches_series(small_scatter_run):
    snap = small_scatter_run.snapshots[0]
    i = int(np.argmin(np.abs(small_scatter_run.times - snap.time)))
    assert snap.overlap == pytest.approx(small_scatter_run.overlap[i], abs=1e-12)


def test_phase_uncertainty_series(small_scatter_run):
    pu = phase_uncertainty_series(small_scatter_run)
    assert pu.variance[0] == 0.0 and pu.variance[-1] == 0.0
    assert pu.variance.max() == pytest.approx(math.pi ** 2 / 4, rel=1e-2)
    assert not pu.bound_violated


def test_barrier_variant_small(small_scatter_model):
    m = small_scatter_model.with_(barrier_L1=0.5)
    phi = barrier_variant_phase(m)
    assert abs(math.remainder(phi - math.pi / 2, 2 * math.pi)) < 0.05 * math.pi / 2


def test_path_integral_single_position(small_scatter_model):
    fm = momentum_transfer_and_path_integral(small_scatter_model, [0.5])
    assert fm.phase_estimate == pytest.approx(math.pi, rel=0.05)
    assert fm.impulses[0] == pytest.approx(2 * small_scatter_model.p0, rel=0.05)
    assert fm.forces[0] > 0
    with pytest.raises(ConfigurationError):
        momentum_transfer_and_path_integral(small_scatter_model, [0.3])


def test_public_probe_free(small_scatter_model):
    m = small_scatter_model
    val = public_potential_probe(m, 1e-2, -3.0)
    assert val == pytest.approx(1e-2 / m.v0, rel=0.05)
    assert public_potential_probe(m, 0.0, -3.0) == 0.0
    with pytest.raises(ConfigurationError):
        public_potential_probe(m, 1e-2, 0.0)


def test_boundary_contamination(small_scatter_model):
    with pytest.raises(BoundaryContaminationError):
        run_scattering(small_scatter_model, t_final=200.0)


def test_backends_give_same_overlap(small_scatter_model):
    from qphase import _kernels
    if not _kernels.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    a = run_scattering(small_scatter_model, backend="numpy")
    b = run_scattering(small_scatter_model, backend="numba")
    assert np.max(np.abs(a.overlap - b.overlap)) < 1e-10


# ---------------------------------------------------------------- heavy particle views

def test_displacement_expectation_matches_overlap(small_scatter_run):
    snap = small_scatter_run.snapshots[0]
    real, fourier = displacement_expectation(snap, HeavySuperposition(), 1.0)
    assert real == pytest.approx(snap.overlap / 2, abs=1e-9)
    assert fourier == pytest.approx(snap.overlap / 2, abs=1e-6)
    with pytest.raises(SeparationError):
        displacement_expectation(snap, HeavySuperposition(sigma=0.3), 1.0)


def test_phase_gradient():
    p, grad = phase_gradient_check(0.005, lambda x: 3.0 * x + 2.0 * x ** 2, x0=0.2)
    assert p == pytest.approx(grad, rel=1e-3)
    with pytest.raises(ConfigurationError):
        phase_gradient_check(0.5, lambda x: x)
