import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qphase import oracle
from qphase.errors import DomainError, InfeasibleBalanceError
from qphase.quadrature import quad
from qphase.schedule import SwitchingSchedule


def test_delta_coeffs_values():
    c = oracle.delta_coeffs(200.0, 1.0)
    assert c.A == pytest.approx(-1 / (1 - 2j / 200))
    assert c.B == pytest.approx(1 + c.A)
    inf = oracle.delta_coeffs(np.inf, 1.0)
    assert inf.A == -1 and inf.B == 0
    shifted = oracle.delta_coeffs(200.0, math.pi / 2, shift_L=1.0)
    assert shifted.A_shifted == pytest.approx(-shifted.A)


@given(st.floats(0.1, 1e4), st.floats(0.01, 50))
def test_delta_unitarity(alpha_tilde, p):
    assert oracle.delta_coeffs(alpha_tilde, p).unitarity_defect < 1e-12


@pytest.mark.parametrize("args", [(0.0, 1.0), (1.0, 0.0), (1.0, 1.0, -1.0)])
def test_delta_domain(args):
    with pytest.raises(DomainError):
        oracle.delta_coeffs(*args)


def test_ramp_overlap_ends():
    W, v0, p0, L = 50.0, math.pi / 2, math.pi / 2, 1.0
    assert oracle.ramp_overlap(W, v0, p0, L, 0.0) == pytest.approx(1.0)
    assert oracle.ramp_overlap(W, v0, p0, L, W / v0) == pytest.approx(-1.0)
    with pytest.raises(DomainError):
        oracle.ramp_overlap(W, v0, p0, L, 2 * W / v0)
    ext = oracle.ramp_overlap_extended(W, v0, p0, L, np.array([-5.0, 1e3]))
    assert ext == pytest.approx([1.0, -1.0])


@given(st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_ramp_overlap_inside_unit_disc(frac, phase):
    W, v0 = 40.0, 2.0
    d = oracle.ramp_overlap(W, v0, phase / 2, 1.0, frac * W / v0)
    assert abs(d) <= 1 + 1e-12


def test_private_potential_and_derivative():
    W, v0, p0, L = 50.0, 1.3, 0.9, 1.0
    pp = oracle.private_potential_scatter(W, v0, p0, L)
    h = 1e-3
    d = (oracle.ramp_overlap(W, v0, p0, L, 10 + h) - oracle.ramp_overlap(W, v0, p0, L, 10 - h)) / (2 * h)
    assert pp == pytest.approx(d, abs=1e-10)
    with pytest.warns(UserWarning):
        oracle.private_potential_scatter(5.0, v0, p0, L)
    assert oracle.private_potential_x_L_term(50, 2, 100) == pytest.approx(4 / 5000)


def test_average_force():
    f, work = oracle.average_force_scatter(math.pi / 2, 10.0, 1.0)
    assert f == pytest.approx(math.pi / 10) and work == pytest.approx(math.pi)


def test_bo_values():
    assert oracle.bo_ground_energy(1.0, 1.0, 1.0) == pytest.approx(-math.sqrt(2))
    assert oracle.bo_polarization(1.0, 1.0, 1.0) == pytest.approx(-1 / math.sqrt(2))
    assert oracle.bo_phase_shift(1.0, 1.0, 1.0, 10.0) == pytest.approx(4.142135623730951)
    with pytest.raises(DomainError):
        oracle.bo_phase_shift(1.0, -1.0, 1.0, 10.0)


@given(st.floats(0.01, 10), st.floats(0, 10), st.floats(-5, 5))
def test_ground_energy_bound(alpha, g, f):
    assert oracle.bo_ground_energy(alpha, g, f) <= -alpha


def test_bo_gamma_matches_quadrature():
    s = SwitchingSchedule(1.0, 0.05, 0.0, 10.0)
    for t in (s.t1p + 3, -20.0, 5.0, 40.0, s.t2p + 2):
        pts = [b for b in s.breakpoints if s.t1p < b < t]
        ref = quad(lambda u: math.hypot(1.0, s.g_scalar(u) * 0.7), s.t1p, t, tol=0.0,
                   rtol=1e-12, points=pts or None)
        assert oracle.bo_gamma(1.0, s, 0.7, t) == pytest.approx(ref, rel=1e-11)


def test_stationary_phase_zero_outside_and_warns():
    s = SwitchingSchedule(1.0, 0.02, 0.0, 10.0)
    ip, im = oracle.stationary_phase_I(1.0, s, 1.0, s.t2p + 1)
    assert ip == 0 and im == 0
    ip, im = oracle.stationary_phase_I(1.0, s, 1.0, 5.0)
    assert im == pytest.approx(np.conj(ip))
    assert abs(ip) == pytest.approx(0.5)  # g cos(theta) / omega at g f = alpha = 1
    with pytest.warns(UserWarning):
        oracle.stationary_phase_I(1.0, SwitchingSchedule(1.0, 0.5, 0.0, 10.0), 1.0, 5.0)


def test_two_dipole_balance():
    X, dU = oracle.two_dipole_balance(5, 1, 2, 1)
    assert X == pytest.approx(0.75, abs=1e-15)
    assert dU == pytest.approx(0.031373033403113926, rel=1e-12)
    d = oracle.balance_details(5, 1, 2, 1)
    assert d.residual < 1e-12
    assert oracle.two_dipole_balance(1, 1, 1, 1) == (0.0, 0.0)
    with pytest.raises(InfeasibleBalanceError):
        oracle.two_dipole_balance(2, 1, 1, 1)
    with pytest.raises(InfeasibleBalanceError, match="need"):
        oracle.two_dipole_balance(1, 5, 2, 1)


def test_gap_estimate():
    e, rate = oracle.double_well_gap_estimate(100.0)
    assert e == pytest.approx(3.81e-4, rel=1e-3)
    assert rate == pytest.approx(5.788e11, rel=1e-3)
    assert oracle.QUOTED_GAP_EV == 1e-2
    with pytest.raises(DomainError):
        oracle.double_well_gap_estimate(0.0)
