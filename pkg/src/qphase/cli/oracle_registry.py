"""Named closed forms exposed on the command line."""
import math

from .. import oracle
from ..schedule import SwitchingSchedule


def _delta(p):
    c = oracle.delta_coeffs(p["alpha_tilde"], p["p"], p["shift_L"])
    return {"A": c.A, "B": c.B, "A_shifted": c.A_shifted}


def _ramp(p):
    return {"value": oracle.ramp_overlap(p["W"], p["v0"], p["p0"], p["L"], p["t"])}


def _private(p):
    return {"value": oracle.private_potential_scatter(p["W"], p["v0"], p["p0"], p["L"])}


def _force(p):
    f, work = oracle.average_force_scatter(p["p0"], p["T"], p["L"])
    return {"force": f, "path_integral": work}


def _bo_energy(p):
    return {"ground": float(oracle.bo_ground_energy(p["alpha"], p["gf"], 1.0)),
            "excited": float(oracle.bo_excited_energy(p["alpha"], p["gf"], 1.0))}


def _bo_pol(p):
    return {"value": float(oracle.bo_polarization(p["alpha"], p["gf"], 1.0))}


def _bo_phase(p):
    return {"value": oracle.bo_phase_shift(p["alpha"], p["gf"], 1.0, p["T"])}


def _stationary(p):
    s = SwitchingSchedule(p["g0"], p["eps"], p["t1"], p["t2"])
    ip, im = oracle.stationary_phase_I(p["alpha"], s, p["f"], p["t"])
    return {"I_plus": ip, "I_minus": im}


def _balance(p):
    d = oracle.balance_details(p["alpha1"], p["alpha2"], p["beta1"], p["beta2"])
    return {"X": d.X, "dU": d.dU, "eps1": d.eps1, "eps2": d.eps2, "gf": math.sqrt(d.X)}


def _gap(p):
    e, rate = oracle.double_well_gap_estimate(p["r"])
    return {"energy_eV": e, "rate_per_s": rate, "quoted_energy_eV": oracle.QUOTED_GAP_EV,
            "quoted_rate_per_s": oracle.QUOTED_RATE_S}


# name -> (function, required params, defaults, formula text)
REGISTRY = {
    "delta-coeffs": (_delta, ("alpha_tilde", "p"), {"shift_L": 0.0},
                     "A = -1/(1 - 2ip/alpha_tilde), B = 1 + A, A_shifted = exp(2ipL) A"),
    "ramp-overlap": (_ramp, ("W", "v0", "p0", "L", "t"), {},
                     "D(t) = (W - v0 t)/W + (v0 t/W) exp(2i p0 L)"),
    "private-potential": (_private, ("W", "v0", "p0", "L"), {},
                          "i<phi1|V1 - V2|phi2> = -(v0/W)(1 - exp(2i p0 L))"),
    "average-force": (_force, ("p0", "T", "L"), {}, "<F> = 2 p0/T, <F> L T = 2 p0 L"),
    "bo-energy": (_bo_energy, ("alpha", "gf"), {}, "E_g,e = -+sqrt(alpha^2 + g^2 f^2)"),
    "bo-polarization": (_bo_pol, ("alpha", "gf"), {},
                        "<sigma_3> = -g f / sqrt(alpha^2 + g^2 f^2)"),
    "bo-phase": (_bo_phase, ("alpha", "gf", "T"), {},
                 "phi_rel = [sqrt(alpha^2 + g^2 f^2) - alpha] T"),
    "stationary-phase": (_stationary, ("alpha", "g0", "eps", "t1", "t2", "f", "t"), {},
                         "I'_pm = g cos(theta) exp(+-i gamma) / (+-i omega)"),
    "two-dipole-balance": (_balance, ("alpha1", "alpha2", "beta1", "beta2"), {},
                           "X = (b2^4 a1^2 - b1^4 a2^2)/(b1^2 b2^2 (b1^2 - b2^2)), "
                           "dU = (eps2 - a2) - (eps1 - a1)"),
    "gap-estimate": (_gap, ("r",), {}, "E = hbar^2/(2 m_e r^2), rate = E/hbar"),
}
