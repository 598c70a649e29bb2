"""Closed-form results used as ground truth by both engines.

Conventions: hbar = 1, light mass m, potential strength alpha = alpha_tilde / (2m).
"""
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InfeasibleBalanceError
from .units import HBAR2_OVER_2ME_EV_A2, HBAR_EV_S


# ---------------------------------------------------------------- delta barrier

@dataclass(frozen=True)
class DeltaScatterCoeffs:
    """Reflection and transmission amplitudes of a delta barrier.

    ``A_shifted`` is the reflection amplitude of the same barrier moved to
    x = shift_L, referred to the origin: exp(2ipL) A.
    """

    A: complex
    B: complex
    alpha_tilde: float
    p: float
    shift_L: float = 0.0

    @property
    def A_shifted(self):
        return complex(np.exp(2j * self.p * self.shift_L) * self.A)

    @property
    def unitarity_defect(self):
        return abs(abs(self.A) ** 2 + abs(self.B) ** 2 - 1.0)


def delta_coeffs(alpha_tilde, p, shift_L=0.0):
    """A = -1/(1 - 2ip/alpha_tilde), B = 1 + A.

    ``alpha_tilde = np.inf`` selects the impenetrable limit A = -1, B = 0.
    """
    if not alpha_tilde > 0:
        raise DomainError("alpha_tilde must be > 0")
    if not p > 0:
        raise DomainError("p must be > 0")
    if shift_L < 0:
        raise DomainError("shift_L must be >= 0")
    if np.isinf(alpha_tilde):
        A = -1.0 + 0.0j
    else:
        A = -1.0 / (1.0 - 2j * p / alpha_tilde)
    return DeltaScatterCoeffs(complex(A), complex(1.0 + A), float(alpha_tilde), float(p),
                              float(shift_L))


# ---------------------------------------------------------------- scattering ramp

def ramp_overlap(W, v0, p0, L, t):
    """Average phase factor (W - v0 t)/W + (v0 t/W) exp(2i p0 L) for 0 <= t <= W/v0."""
    t = np.asarray(t, dtype=float)
    T = W / v0
    if np.any(t < -1e-12 * T) or np.any(t > T * (1 + 1e-12)):
        raise DomainError(f"t must lie in [0, T={T:.6g}]")
    frac = np.clip(v0 * t / W, 0.0, 1.0)
    out = (1.0 - frac) + frac * np.exp(2j * p0 * L)
    return complex(out) if out.ndim == 0 else out


def ramp_overlap_extended(W, v0, p0, L, t):
    """``ramp_overlap`` clamped to 1 before and exp(2ip0L) after the event."""
    frac = np.clip(v0 * np.asarray(t, dtype=float) / W, 0.0, 1.0)
    return (1.0 - frac) + frac * np.exp(2j * p0 * L)


def private_potential_scatter(W, v0, p0, L):
    """Plateau private potential -(v0/W)(1 - exp(2i p0 L)) in the impenetrable limit."""
    if W < 10 * L:
        warnings.warn(f"W={W} < 10 L={10 * L}: plateau formula assumes W >> L", stacklevel=2)
    return complex(-(v0 / W) * (1.0 - np.exp(2j * p0 * L)))


def private_potential_x_L_term(W, v0, alpha):
    """Magnitude scale v0^2/(W alpha) of the x = L contribution at finite strength."""
    return float(v0 ** 2 / (W * alpha))


def average_force_scatter(p0, T, L):
    """Constant average force 2p0/T and its path integral 2p0 L."""
    if not T > 0:
        raise DomainError("T must be > 0")
    force = 2.0 * p0 / T
    return float(force), float(force * L * T)


# ---------------------------------------------------------------- two-level dipole

def bo_ground_energy(alpha, g, f):
    """E_g = -sqrt(alpha^2 + g^2 f^2)."""
    return -np.sqrt(alpha ** 2 + (np.asarray(g) * f) ** 2)


def bo_excited_energy(alpha, g, f):
    return np.sqrt(alpha ** 2 + (np.asarray(g) * f) ** 2)


def bo_polarization(alpha, g, f):
    """Ground-state <sigma_3> = -g f / sqrt(alpha^2 + g^2 f^2)."""
    gf = np.asarray(g) * f
    return -gf / np.sqrt(alpha ** 2 + gf ** 2)


def bo_excited_polarization(alpha, g, f):
    return -bo_polarization(alpha, g, f)


def bo_phase_shift(alpha, g0, f_z2, T_plateau):
    """Plateau relative phase [sqrt(alpha^2 + g0^2 f^2) - alpha] T."""
    if min(alpha, g0, f_z2, T_plateau) < 0:
        raise DomainError("all arguments must be >= 0")
    return float((np.sqrt(alpha ** 2 + (g0 * f_z2) ** 2) - alpha) * T_plateau)


def _ramp_primitive(a, b, x):
    # (1/eps-free) primitive of sqrt(a^2 + b^2 e^{2x}) in x: u + (a/2) ln((u-a)/(u+a))
    u = np.sqrt(a * a + b * b * np.exp(2 * x))
    # u - a = b^2 e^{2x} / (u + a) avoids cancellation when b e^x << a
    return u + 0.5 * a * (np.log(b * b) + 2 * x - 2 * np.log(u + a))


def bo_gamma(alpha, schedule, f, t):
    """gamma(t) = integral of omega = sqrt(alpha^2 + g^2 f^2) from the switch-on cutoff t1'.

    Exact piecewise antiderivative; negative (alpha (t - t1')) before the cutoff.
    """
    t = np.asarray(t, dtype=float)
    s, a, b, eps = schedule, float(alpha), float(schedule.g0 * f), schedule.eps
    if b == 0.0:
        out = a * (t - s.t1p)
        return out if out.ndim else float(out)

    def on(x):  # x = eps (t - t1) <= 0
        return _ramp_primitive(a, b, x) / eps

    x1p = eps * (s.t1p - s.t1)
    full_on = on(0.0) - on(x1p)
    w = np.sqrt(a * a + b * b)
    full_plateau = w * s.plateau
    out = np.empty_like(t)
    m0 = t < s.t1p
    out[m0] = a * (t[m0] - s.t1p)
    m1 = (t >= s.t1p) & (t < s.t1)
    out[m1] = on(eps * (t[m1] - s.t1)) - on(x1p)
    m2 = (t >= s.t1) & (t <= s.t2)
    out[m2] = full_on + w * (t[m2] - s.t1)
    m3 = (t > s.t2) & (t <= s.t2p)
    # mirror image of the on-ramp: integral from t2 to t equals on(0) - on(-eps (t - t2))
    out[m3] = full_on + full_plateau + on(0.0) - on(-eps * (t[m3] - s.t2))
    m4 = t > s.t2p
    out[m4] = full_on + full_plateau + full_on + a * (t[m4] - s.t2p)
    return out if out.ndim else float(out)


def stationary_phase_I(alpha, schedule, f, t):
    """Leading stationary-phase values of the uncertainty inner integrals.

    I'_pm(t) = g cos(theta) exp(+-i gamma) / (+-i omega) with cos(theta) = alpha/omega,
    gamma measured from the switch-on cutoff. The lower boundary term vanishes
    because g = 0 there, and the result is exactly 0 once g has switched off.

    Returns
    -------
    (I_plus, I_minus) : complex or ndarray
    """
    if alpha / schedule.eps < 10:
        warnings.warn(f"adiabaticity ratio alpha/eps = {alpha / schedule.eps:.3g} < 10; "
                      "stationary-phase form is unreliable", stacklevel=2)
    t = np.asarray(t, dtype=float)
    g = np.asarray(schedule.g(t))
    omega = np.sqrt(alpha ** 2 + (g * f) ** 2)
    cos_t = alpha / omega
    gam = np.asarray(bo_gamma(alpha, schedule, f, t))
    amp = g * cos_t / omega
    ip = amp * np.exp(1j * gam) / 1j
    im = amp * np.exp(-1j * gam) / (-1j)
    if ip.ndim == 0:
        return complex(ip), complex(im)
    return ip, im


# ---------------------------------------------------------------- two dipoles

class BalanceDetail(NamedTuple):
    X: float
    dU: float
    eps1: float
    eps2: float
    residual: float
    degenerate: bool


def balance_details(alpha1, alpha2, beta1, beta2):
    """Root X of beta1^2 eps2 = beta2^2 eps1 with eps_i = sqrt(alpha_i^2 + beta_i^2 X).

    Dipole 1 sits in its ground state and dipole 2 in its excited state.
    """
    if min(alpha1, alpha2) <= 0 or min(beta1, beta2) <= 0:
        raise DomainError("alphas and betas must be > 0")
    b1, b2 = beta1 ** 2, beta2 ** 2
    num = b2 * b2 * alpha1 ** 2 - b1 * b1 * alpha2 ** 2
    den = b1 * b2 * (b1 - b2)
    if den == 0.0:
        if num == 0.0:
            return BalanceDetail(0.0, 0.0, float(alpha1), float(alpha2), 0.0, True)
        raise InfeasibleBalanceError(
            "beta1 == beta2 requires alpha1 == alpha2: eps1 != eps2 for every X")
    X = num / den
    if X < 0:
        raise InfeasibleBalanceError(
            "no root with X >= 0: need (beta2^4 alpha1^2 - beta1^4 alpha2^2)"
            " / (beta1^2 - beta2^2) >= 0")
    e1 = float(np.sqrt(alpha1 ** 2 + b1 * X))
    e2 = float(np.sqrt(alpha2 ** 2 + b2 * X))
    dU = (e2 - alpha2) - (e1 - alpha1)
    return BalanceDetail(float(X), float(dU), e1, e2, float(abs(b1 * e2 - b2 * e1)), False)


def two_dipole_balance(alpha1, alpha2, beta1, beta2, g0=None):
    """Return (X, dU) of the two-dipole public-potential balance.

    ``g0`` is accepted for interface symmetry; the plateau coupling at the
    balance point is f = sqrt(X)/g0.
    """
    d = balance_details(alpha1, alpha2, beta1, beta2)
    return d.X, d.dU


# ---------------------------------------------------------------- feasibility

QUOTED_GAP_EV = 1e-2
QUOTED_RATE_S = 1e13


def double_well_gap_estimate(r):
    """hbar^2/(2 m_e r^2) for ``r`` in Angstrom.

    Returns
    -------
    energy_eV : float
    rate_per_s : float
        energy / hbar, an angular frequency.
    """
    if not r > 0:
        raise DomainError("r must be > 0")
    e = HBAR2_OVER_2ME_EV_A2 / r ** 2
    return float(e), float(e / HBAR_EV_S)
