"""Two independent dipoles whose public potentials cancel on the plateau."""
from dataclasses import dataclass

import numpy as np

from .. import oracle
from ..errors import BracketError, ConfigurationError
from ..quadrature import find_root


@dataclass(frozen=True)
class TwoDipoleReport:
    """Balance point of a ground-state dipole 1 and an excited dipole 2.

    Attributes
    ----------
    z_balance : float or None
        Heavy-particle position where the public potential vanishes on the
        plateau; None in the degenerate case where it vanishes everywhere.
    gf_balance : float
        g0 f at the balance point.
    residual : float
        |beta1^2 eps2 - beta2^2 eps1| at the root.
    polarization : float
        beta1 <sigma_3^1> + beta2 <sigma_3^2> at the root on the plateau.
    dU : float
        U_BO(z_balance) - U_BO(z1) from the two energy sheets.
    dU_closed : float
        (eps2 - alpha2) - (eps1 - alpha1) from the closed-form balance.
    off_plateau_residual : float
        Balance function at the same position with g = g0/2.
    degenerate : bool
    """

    z_balance: float
    gf_balance: float
    residual: float
    polarization: float
    dU: float
    dU_closed: float
    off_plateau_residual: float
    degenerate: bool

    @property
    def off_plateau_fails(self):
        return self.degenerate is False and abs(self.off_plateau_residual) > 1e3 * max(self.residual, 1e-15)

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__} | {
            "off_plateau_fails": self.off_plateau_fails}


def _energies(model, g, f):
    d2 = model.second_dipole
    e1 = np.sqrt(model.alpha ** 2 + (model.beta * g * f) ** 2)
    e2 = np.sqrt(d2.alpha2 ** 2 + (d2.beta2 * g * f) ** 2)
    return e1, e2


def balance_function(model, z, g=None):
    """beta1^2 eps2 - beta2^2 eps1 at position z; zero where the polarizations cancel."""
    g = model.schedule.g0 if g is None else g
    e1, e2 = _energies(model, g, model.f(z))
    return model.beta ** 2 * e2 - model.second_dipole.beta2 ** 2 * e1


def bo_potential(model, z, g=None):
    """U_BO = E_g of dipole 1 plus E_exc of dipole 2."""
    g = model.schedule.g0 if g is None else g
    e1, e2 = _energies(model, g, model.f(z))
    return e2 - e1


def _bracket(model, n_scan=4000):
    lo_cage = model.z1 - model.cage_radius - model.cage_transition
    hi_cage = model.z1 + model.cage_radius + model.cage_transition
    if model.table_z is not None:
        lo, hi = model.table_z[0], model.table_z[-1]
    else:
        lo, hi = 1e-3 * min(model.z1, model.z2), 10.0 * max(model.z1, model.z2) + hi_cage
    # scan from the cage edge outwards on the side of z2
    if model.z2 < model.z1:
        zs = np.linspace(lo_cage, lo, n_scan)
    else:
        zs = np.linspace(hi_cage, hi, n_scan)
    h = np.array([balance_function(model, z) for z in zs])
    flips = np.nonzero(np.sign(h[:-1]) != np.sign(h[1:]))[0]
    if flips.size == 0:
        raise BracketError("balance function does not change sign outside the cage")
    i = flips[0]
    return sorted((zs[i], zs[i + 1]))


def two_dipole_experiment(model):
    """Locate the public-potential balance point and the residual private potential.

    Raises
    ------
    ConfigurationError
        If the model has no second dipole or it is not prepared excited.
    InfeasibleBalanceError
        Passed through from the closed-form balance.
    """
    d2 = model.second_dipole
    if d2 is None:
        raise ConfigurationError("two_dipole_experiment needs a second dipole")
    if d2.initial_state != "excited":
        raise ConfigurationError("the balance needs dipole 2 prepared in its excited state")
    det = oracle.balance_details(model.alpha, d2.alpha2, model.beta, d2.beta2)
    g0 = model.schedule.g0
    if det.degenerate:
        return TwoDipoleReport(None, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, True)
    z = find_root(lambda x: balance_function(model, x), _bracket(model))
    f = model.f(z)
    e1, e2 = _energies(model, g0, f)
    pol = g0 * f * (d2.beta2 ** 2 / e2 - model.beta ** 2 / e1)
    dU = float(bo_potential(model, z) - bo_potential(model, model.z1))
    return TwoDipoleReport(
        z_balance=float(z), gf_balance=float(g0 * f),
        residual=float(abs(balance_function(model, z))), polarization=float(pol),
        dU=dU, dU_closed=det.dU,
        off_plateau_residual=float(balance_function(model, z, 0.5 * g0)),
        degenerate=False)
