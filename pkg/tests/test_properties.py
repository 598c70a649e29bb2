"""Invariants checked over randomized inputs."""
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qphase import Grid1D, SwitchingSchedule
from qphase.cli.config import parse_value
from qphase.cli.io import fmt
from qphase.dipole import DipoleModel, SecondDipole, balance_function, heisenberg_sigma3
from qphase.oracle import (balance_details, bo_ground_energy, bo_polarization, delta_coeffs,
                           ramp_overlap_extended)
from qphase.propagate import CrankNicolson

pos = st.floats(0.05, 20.0)


@given(st.floats(0.1, 1e4), st.floats(0.05, 10.0), st.floats(0.0, 5.0))
def test_shifted_reflection_keeps_modulus(alpha_tilde, p, shift):
    c = delta_coeffs(alpha_tilde, p, shift_L=shift)
    assert abs(c.A_shifted) == pytest.approx(abs(c.A), rel=1e-12)
    assert c.unitarity_defect < 1e-12


@given(st.floats(-5.0, 5.0), st.floats(0.1, 3.0))
def test_extended_ramp_is_bounded_and_clamped(t, p0):
    d = ramp_overlap_extended(2.0, 1.0, p0, 1.0, t)
    assert abs(d) <= 1.0 + 1e-12
    if t <= 0:
        assert d == 1.0
    if t >= 2.0:
        assert d == pytest.approx(np.exp(2j * p0))


@given(pos, pos, pos)
def test_polarization_is_minus_energy_derivative(alpha, g, f):
    h = 1e-4 * g
    dE = (bo_ground_energy(alpha, g + h, f) - bo_ground_energy(alpha, g - h, f)) / (2 * h)
    # dE/dg = f <sigma_3>
    assert dE == pytest.approx(f * bo_polarization(alpha, g, f), rel=1e-5, abs=1e-7)
    assert -1.0 <= bo_polarization(alpha, g, f) <= 0.0


@given(st.floats(0.0, 3.0), st.floats(0.01, 1.0), st.floats(-50.0, 400.0))
def test_schedule_bounded(g0, eps, t):
    s = SwitchingSchedule(g0, eps, 0.0, 10.0)
    v = s.g(t)
    assert 0.0 <= v <= g0
    assert s.g_scalar(t) == pytest.approx(float(v), rel=1e-14, abs=0.0)


@given(st.floats(0.05, 10.0))
def test_cage_mask_profile(z):
    m = DipoleModel()
    f = m.f(z)
    assert 0.0 <= f <= m.Qe / z ** 2 * (1 + 1e-14)
    if abs(z - m.z1) <= m.cage_radius:
        assert f == 0.0


@given(st.floats(0.8, 2.4), st.floats(-30.0, 40.0))
def test_heisenberg_sigma3_unit_norm(z, t):
    m = DipoleModel(schedule=SwitchingSchedule(1.0, 0.2, 0.0, 10.0))
    c = np.array(heisenberg_sigma3(m, z, t, tol=1e-10))
    assert np.linalg.norm(c) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.floats(0.3, 3.0), st.floats(0.3, 3.0))
def test_balance_root_cancels_polarizations(a1, a2, b1, b2):
    assume(abs(b1 - b2) > 1e-2)
    try:
        d = balance_details(a1, a2, b1, b2)
    except Exception:
        return
    # weighted polarizations: beta1^2/eps1 (ground) against beta2^2/eps2 (excited)
    assert b1 ** 2 / d.eps1 == pytest.approx(b2 ** 2 / d.eps2, rel=1e-9)
    assert d.X >= 0


@given(st.floats(1.0, 2.3))
def test_balance_function_sign_matches_closed_form(z):
    m = DipoleModel(beta=2.0, second_dipole=SecondDipole(1.0, 1.0))
    val = balance_function(m, z)
    X = (m.schedule.g0 * m.f(z)) ** 2
    e1, e2 = math.sqrt(1 + 4 * X), math.sqrt(1 + X)
    assert val == pytest.approx(4 * e2 - e1, rel=1e-12, abs=1e-12)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(["numpy", "numba"]))
def test_crank_nicolson_unitary(seed, backend):
    rng = np.random.default_rng(seed)
    g = Grid1D(-8.0, 8.0, 128)
    v = rng.uniform(-2.0, 2.0, g.x.size)
    psi = (rng.normal(size=g.x.size) + 1j * rng.normal(size=g.x.size)).astype(complex)
    psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * g.dx)
    CrankNicolson(g, v, 0.05, backend=backend).advance(psi, 20)
    assert np.sum(np.abs(psi) ** 2) * g.dx == pytest.approx(1.0, abs=1e-11)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_parse_round_trip(x):
    assert parse_value("dipole.alpha", fmt(x)) == x
