"""Adiabatic switching schedule g(t)."""
from dataclasses import dataclass

import math

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class SwitchingSchedule:
    """Exponential switch-on, flat plateau, exponential switch-off.

    g(t) = g0 exp(eps (t - t1)) on [t1', t1], g0 on [t1, t2],
    g0 exp(-eps (t - t2)) on [t2, t2'] and zero outside, where the cutoffs
    are placed where the exponential has fallen to ``cutoff``.

    Parameters
    ----------
    g0 : float
        Plateau strength.
    eps : float
        Switching rate.
    t1, t2 : float
        Plateau start and end.
    cutoff : float
        Value of exp(-eps |tau|) at which the tails are truncated.
    """

    g0: float
    eps: float
    t1: float
    t2: float
    cutoff: float = 1e-6

    def __post_init__(self):
        if self.g0 < 0:
            raise ConfigurationError("g0 must be >= 0")
        if not self.eps > 0:
            raise ConfigurationError("eps must be > 0")
        if not self.t1 < self.t2:
            raise ConfigurationError("schedule needs t1 < t2")
        if not 0 < self.cutoff < 1:
            raise ConfigurationError("cutoff must lie in (0, 1)")

    @property
    def tail(self):
        """Duration of each exponential tail."""
        return float(np.log(1.0 / self.cutoff) / self.eps)

    @property
    def t1p(self):
        return self.t1 - self.tail

    @property
    def t2p(self):
        return self.t2 + self.tail

    @property
    def plateau(self):
        return self.t2 - self.t1

    @property
    def breakpoints(self):
        return (self.t1p, self.t1, self.t2, self.t2p)

    def g(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        on = (t >= self.t1p) & (t < self.t1)
        out[on] = self.g0 * np.exp(self.eps * (t[on] - self.t1))
        out[(t >= self.t1) & (t <= self.t2)] = self.g0
        off = (t > self.t2) & (t <= self.t2p)
        out[off] = self.g0 * np.exp(-self.eps * (t[off] - self.t2))
        return out if out.ndim else float(out)

    def g_scalar(self, t):
        """Fast scalar version of :meth:`g` for ODE right-hand sides."""
        if t < self.t1p or t > self.t2p:
            return 0.0
        if t < self.t1:
            return self.g0 * math.exp(self.eps * (t - self.t1))
        if t <= self.t2:
            return self.g0
        return self.g0 * math.exp(-self.eps * (t - self.t2))

    def dg(self, t):
        """Piecewise derivative; one-sided values at the kinks are irrelevant for quadrature."""
        t = np.asarray(t, dtype=float)
        g = np.asarray(self.g(t))
        out = np.zeros_like(t)
        on = (t >= self.t1p) & (t < self.t1)
        out[on] = self.eps * g[on]
        off = (t > self.t2) & (t <= self.t2p)
        out[off] = -self.eps * g[off]
        return out if out.ndim else float(out)

    def adiabaticity(self, alpha):
        return alpha / self.eps

    def scaled(self, factor):
        """Copy with g0 multiplied by ``factor`` (used for off-plateau checks)."""
        return SwitchingSchedule(self.g0 * factor, self.eps, self.t1, self.t2, self.cutoff)
