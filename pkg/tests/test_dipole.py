import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qphase import oracle
from qphase.dipole import (DipoleModel, SecondDipole, bo_force, evolve_dipole, gedanken_run,
                           heisenberg_sigma3, perturbation_energy_check,
                           private_potential_difference, public_potential_test,
                           relative_phase_trajectory, stationary_phase_check,
                           weak_probe_energy, two_dipole_experiment, uncertainty_integrals)
from qphase.dipole.engine import default_times, tail_phase
from qphase.dipole.two_dipole import balance_function
from qphase.errors import (AdiabaticityError, ConfigurationError, DomainError,
                           InfeasibleBalanceError)
from qphase.quadrature import quad
from qphase.schedule import SwitchingSchedule


# ---------------------------------------------------------------- model

def test_profile_mask():
    m = DipoleModel()
    assert m.f(m.z1) == 0.0 and m.df(m.z1) == 0.0
    assert m.f(1.0) == 1.0 and m.df(1.0) == -2.0
    z = np.linspace(1.8, 2.7, 301)
    h = 1e-6
    fd = (m.f(z + h) - m.f(z - h)) / (2 * h)
    assert np.allclose(fd, m.df(z), atol=1e-7)


def test_model_validation():
    with pytest.raises(ConfigurationError):
        DipoleModel(alpha=0.0)
    with pytest.raises(ConfigurationError):
        DipoleModel(z2=2.4)  # inside the cage transition
    with pytest.warns(UserWarning):
        DipoleModel(schedule=SwitchingSchedule(50.0, 0.02, 0, 10))
    with pytest.raises(DomainError):
        DipoleModel().f(-1.0)


def test_tabulated_profile_matches_power_law():
    zt = tuple(np.linspace(0.5, 5.0, 400))
    m = DipoleModel(table_z=zt, table_f=tuple(1 / np.array(zt) ** 2))
    assert m.f(1.3) == pytest.approx(1 / 1.3 ** 2, rel=1e-6)
    assert m.df(1.3) == pytest.approx(-2 / 1.3 ** 3, rel=1e-4)


# ---------------------------------------------------------------- evolution

def test_uncoupled_state_is_stationary():
    m = DipoleModel(schedule=SwitchingSchedule(0.0, 0.05, 0.0, 10.0))
    tr = evolve_dipole(m, m.z2, tol=1e-10)
    t = tr.times - tr.times[0]
    assert np.allclose(tr.states[:, 0], np.exp(1j * t), atol=1e-8)
    assert np.allclose(tr.dynamic_phase, -t)


def test_caged_branch_equals_uncoupled(fast_dipole):
    tr = evolve_dipole(fast_dipole, fast_dipole.z1)
    t = tr.times - tr.times[0]
    assert np.allclose(tr.states[:, 0], np.exp(1j * t), atol=1e-8)


def test_adiabatic_following_and_dynamic_phase(fast_dipole):
    m = fast_dipole
    tr = evolve_dipole(m, m.z2, tol=1e-10)
    assert tr.norm_drift < 1e-9
    assert tr.ground_overlap[-1] >= 0.999
    s = m.schedule
    e = lambda t: -math.hypot(1.0, s.g_scalar(t))  # noqa: E731
    t0, t1 = tr.times[0], tr.times[-1]
    ref = quad(e, t0, t1, tol=1e-10, points=list(s.breakpoints))
    assert tr.dynamic_phase[-1] == pytest.approx(ref, abs=1e-6)


def test_evolution_must_start_before_switch_on(fast_dipole):
    with pytest.raises(ConfigurationError):
        evolve_dipole(fast_dipole, 1.0, times=np.linspace(0, 10, 5))


# ---------------------------------------------------------------- forces and potentials

def test_bo_force_examples(fast_dipole):
    assert bo_force(fast_dipole, 1.0, 5.0) == pytest.approx(-math.sqrt(2))
    assert bo_force(fast_dipole, 1.0, fast_dipole.schedule.t2p + 1) == 0.0
    with pytest.raises(DomainError):
        bo_force(fast_dipole, 0.0, 5.0)


def test_private_potential_difference(fast_dipole):
    q, c = private_potential_difference(fast_dipole, 5.0)
    assert c == pytest.approx(1 - math.sqrt(2))
    assert q == pytest.approx(c, rel=1e-10)
    assert private_potential_difference(fast_dipole, 1e4) == (0.0, 0.0)


def test_public_potential_examples(fast_dipole):
    assert weak_probe_energy(1.0, 1.0, 1.0, 0.5, 1e-3)[0] == pytest.approx(-0.353553, abs=1e-6)
    assert public_potential_test(fast_dipole, 1.0, 0.01, fast_dipole.z1).value == 0.0
    ratios = []
    for eps in (1e-2, 1e-3, 1e-4):
        r = public_potential_test(fast_dipole, 1.0, eps, math.sqrt(2))
        ratios.append(r.gap / eps ** 2)
    assert max(ratios) / min(ratios) < 1.1


def test_perturbation_check_quadratic(fast_dipole):
    assert perturbation_energy_check(fast_dipole, 1.5, 0.0) == (0.0, 0.0)
    errs = [abs(np.subtract(*perturbation_energy_check(fast_dipole, 1.5, dz)))
            for dz in (0.1, 0.05, 0.025)]
    assert errs[0] / errs[1] == pytest.approx(4, abs=0.5)
    assert errs[1] / errs[2] == pytest.approx(4, abs=0.5)


# ---------------------------------------------------------------- phase

@pytest.fixture(scope="module")
def phase_traj(fast_dipole):
    return relative_phase_trajectory(fast_dipole)


def test_phase_trajectory_invariants(phase_traj, fast_dipole):
    tr = phase_traj
    s = fast_dipole.schedule
    before = tr.times < s.t1p
    assert np.allclose(tr.total_factor[before], 1.0) and np.allclose(tr.R[before], 1.0)
    assert np.all(np.abs(tr.total_factor) <= 1 + 1e-9)
    during = (tr.times > s.t1 - 30) & (tr.times < s.t2 + 30)
    assert np.all(np.abs(tr.total_factor[during]) < 1)
    assert abs(tr.R_exact[-1]) >= 0.999
    assert tr.phi0 == 0.0


def test_gedanken_three_way(fast_dipole):
    gk = gedanken_run(fast_dipole)
    assert gk.max_delta < 2 * math.pi * 1e-2
    assert gk.plateau_phase == pytest.approx(10 * (math.sqrt(2) - 1))


def test_gedanken_plateau_doubles_tails_fixed(fast_dipole):
    m2 = fast_dipole.with_schedule(t2=20.0)
    a, b = gedanken_run(fast_dipole), gedanken_run(m2)
    assert b.plateau_phase == pytest.approx(2 * a.plateau_phase)
    assert b.tail_phase == pytest.approx(a.tail_phase, rel=1e-9)
    assert b.phi_exact - a.phi_exact == pytest.approx(a.plateau_phase, abs=2e-2)


def test_gedanken_uncoupled():
    m = DipoleModel(schedule=SwitchingSchedule(0.0, 0.05, 0.0, 10.0))
    gk = gedanken_run(m)
    assert gk.phi_exact == pytest.approx(0.0, abs=1e-9) and gk.phi0 == 0.0


def test_nonadiabatic_raises_with_R():
    m = DipoleModel(schedule=SwitchingSchedule(1.0, 0.5, 0.0, 10.0))
    with pytest.raises(AdiabaticityError) as info:
        gedanken_run(m)
    assert "R_final" in info.value.values


def test_heisenberg_triple(fast_dipole):
    m = fast_dipole
    assert heisenberg_sigma3(m, 1.0, m.schedule.t1p - 10) == (0.0, 0.0, 1.0)
    c = heisenberg_sigma3(m, 1.0, 5.0)
    assert c[0] == pytest.approx(1 / math.sqrt(2))
    for t in np.linspace(m.schedule.t1p, m.schedule.t2p, 9):
        assert sum(x * x for x in heisenberg_sigma3(m, 1.0, t)) == pytest.approx(1.0, abs=1e-12)


def test_tail_phase_formula():
    # each ramp contributes (1/eps)(sqrt(2) - 1 - ln((1 + sqrt(2))/2)) up to the cutoff
    m = DipoleModel()
    one = (math.sqrt(2) - 1 - math.log((1 + math.sqrt(2)) / 2)) / 0.02
    assert tail_phase(m) == pytest.approx(2 * one, rel=1e-6)


# ---------------------------------------------------------------- uncertainty

def test_uncertainty_ends_and_plateau(fast_dipole):
    m = fast_dipole
    s = m.schedule
    u = uncertainty_integrals(m, [s.t1p - 5, 5.0, s.t2p + 5])
    assert u.delta_phi_sq[0] == 0.0
    assert u.delta_phi_sq[1] > 1e-2
    assert u.delta_phi_sq[2] < 1e-3
    assert np.allclose(u.delta_phi ** 2, u.delta_phi_sq)


def test_uncertainty_node_convergence(fast_dipole):
    a = uncertainty_integrals(fast_dipole, [5.0], n_per_segment=16).delta_phi_sq[0]
    b = uncertainty_integrals(fast_dipole, [5.0], n_per_segment=32).delta_phi_sq[0]
    assert a == pytest.approx(b, rel=1e-5)


def test_stationary_phase_gap(fast_dipole):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c = stationary_phase_check(fast_dipole)
    assert c.rel_gap < c.eps_over_omega


# ---------------------------------------------------------------- two dipoles

def test_two_dipole_example():
    m = DipoleModel(alpha=5.0, beta=2.0, second_dipole=SecondDipole(1.0, 1.0))
    r = two_dipole_experiment(m)
    assert r.gf_balance == pytest.approx(math.sqrt(3) / 2, rel=1e-12)
    assert r.residual < 1e-12 and abs(r.polarization) < 1e-12
    assert r.dU == pytest.approx(r.dU_closed, abs=1e-12)
    assert r.dU == pytest.approx(0.0314, abs=1e-4)
    assert r.off_plateau_fails
    assert balance_function(m, r.z_balance, g=0.5) != 0


def test_two_dipole_degenerate_and_errors():
    r = two_dipole_experiment(DipoleModel(second_dipole=SecondDipole(1.0, 1.0)))
    assert r.degenerate and r.dU == 0.0
    with pytest.raises(InfeasibleBalanceError):
        two_dipole_experiment(DipoleModel(alpha=2.0, second_dipole=SecondDipole(1.0, 1.0)))
    with pytest.raises(ConfigurationError):
        two_dipole_experiment(DipoleModel())
    with pytest.raises(ConfigurationError):
        two_dipole_experiment(DipoleModel(alpha=5.0, beta=2.0,
                                          second_dipole=SecondDipole(1.0, 1.0, "ground")))


@given(st.floats(0.2, 5), st.floats(0.2, 3), st.floats(0, 40))
def test_quadrature_identity_property(alpha, g0, t):
    m = DipoleModel(alpha=alpha, schedule=SwitchingSchedule(g0, 0.1, 0.0, 20.0))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        q, c = private_potential_difference(m, t)
    assert q == pytest.approx(c, rel=1e-9, abs=1e-300)
