"""Scattering model: barrier, packet geometry and lattice parameters."""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from ..grid import Grid1D
from ..units import UnitSystem

PACKET_SHAPES = ("flat_top", "gaussian")


@dataclass(frozen=True)
class ScatteringModel:
    """Two-branch delta-barrier scattering setup.

    Parameters
    ----------
    alpha_tilde : float
        Dimensionless barrier strength 2 m alpha.
    L : float
        Separation of the two heavy-particle positions (barrier at 0 and at L).
    W : float
        Incident packet width (intensity full width at half maximum).
    p0 : float
        Mean incident momentum.
    barrier_L1 : float, optional
        Position of an impenetrable wall in (0, L) shared by both branches.
    delta_width : float, optional
        Raised-cosine regularization width; defaults to min(dx, L/50, 1/(10 p0)).
        Widths at or below dx collapse to a single lattice site.
    packet_shape : {"flat_top", "gaussian"}
    packet_order : int
        Super-Gaussian order of the flat-top amplitude.
    margin : float
        Gap between the front half-maximum point and the barrier at t = 0.
    cells_per_L : int
        Lattice resolution; dx = L / cells_per_L puts 0, L (and L1 when it is a
        multiple of dx) on lattice sites.
    dt_target : float
        Upper bound on the time step. The step is shrunk so that L/v0 is an
        integer number of steps.
    sample_every : int
        Steps between recorded samples; must divide the steps per L/v0.
    wall_height_factor : float
        Hard-wall height in units of p0^2/2m.
    absorb_fraction : float
        Absorbing-layer width as a fraction of the domain at each end.
    allow_narrow : bool
        Accept W < 10 L with a warning.
    mass : float
        Light-particle mass.
    """

    alpha_tilde: float = 200.0
    L: float = 1.0
    W: float = 50.0
    p0: float = math.pi / 2
    barrier_L1: float = None
    delta_width: float = None
    packet_shape: str = "flat_top"
    packet_order: int = 8
    margin: float = 20.0
    cells_per_L: int = 64
    dt_target: float = 0.01
    sample_every: int = 4
    wall_height_factor: float = 1e6
    absorb_fraction: float = 0.1
    allow_narrow: bool = False
    mass: float = 1.0

    def __post_init__(self):
        UnitSystem(self.mass)
        for name in ("alpha_tilde", "L", "W", "p0", "margin", "dt_target"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and np.isfinite(v) and v > 0):
                raise ConfigurationError(f"{name} must be a finite number > 0, got {v!r}")
        if self.W < 10 * self.L:
            if not self.allow_narrow:
                raise ConfigurationError(
                    f"W >= 10L rule violated: W={self.W}, L={self.L} (override to proceed)")
            warnings.warn(f"W={self.W} < 10L; plateau formulas lose accuracy", stacklevel=2)
        if self.packet_shape not in PACKET_SHAPES:
            raise ConfigurationError(f"packet_shape must be one of {PACKET_SHAPES}")
        if int(self.cells_per_L) < 4:
            raise ConfigurationError("cells_per_L must be >= 4")
        if self.packet_order < 2:
            raise ConfigurationError("packet_order must be >= 2")
        if self.barrier_L1 is not None:
            if not 0 < self.barrier_L1 < self.L:
                raise ConfigurationError("barrier_L1 must lie in (0, L)")
            q = self.barrier_L1 / self.dx
            if abs(q - round(q)) > 1e-9:
                raise ConfigurationError("barrier_L1 must be a multiple of dx = L/cells_per_L")
        w_max = min(1.0 / (10 * self.p0), self.L / 50)
        if self.delta_width is not None and not 0 < self.delta_width <= w_max * (1 + 1e-12):
            raise ConfigurationError(
                f"delta_width must lie in (0, min(1/(10 p0), L/50)] = (0, {w_max:.4g}]")
        if self.sample_every < 1 or self.steps_per_L % self.sample_every:
            raise ConfigurationError(
                f"sample_every={self.sample_every} must divide the {self.steps_per_L} steps per L/v0")
        if self.wall_height_factor < 1e3:
            raise ConfigurationError("wall_height_factor below 1e3 does not act as a hard wall")

    # derived quantities -------------------------------------------------

    @property
    def alpha(self):
        return self.alpha_tilde / (2.0 * self.mass)

    @property
    def v0(self):
        return self.p0 / self.mass

    @property
    def dx(self):
        return self.L / int(self.cells_per_L)

    @property
    def width(self):
        if self.delta_width is not None:
            return float(self.delta_width)
        return min(self.dx, 1.0 / (10 * self.p0), self.L / 50)

    @property
    def steps_per_L(self):
        """Time steps per heavy-separation transit L/v0."""
        return max(1, int(math.ceil((self.L / self.v0) / self.dt_target - 1e-9)))

    @property
    def dt(self):
        return (self.L / self.v0) / self.steps_per_L

    @property
    def wall_height(self):
        return self.wall_height_factor * self.p0 ** 2 / (2 * self.mass)

    @property
    def nominal_T(self):
        return self.W / self.v0

    @property
    def default_t_final(self):
        """Long enough for the back edge and its dispersive tail to clear both barriers."""
        return (self.margin + self.W + self.L + 0.6 * self.W) / self.v0

    def grid(self):
        """Lattice spanning at least [-3W, L + 3W] inside the absorbing layers."""
        need = 6 * self.W + self.L
        span_cells = need / self.dx / (1 - 2 * self.absorb_fraction)
        n = 1 << max(4, int(math.ceil(math.log2(span_cells))))
        layer = self.absorb_fraction * n
        origin = int(math.ceil(3 * self.W / self.dx + layer))
        return Grid1D.anchored(self.dx, n, origin)

    def with_(self, **changes):
        """Copy with fields replaced."""
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d.update(changes)
        return ScatteringModel(**d)

    def refined(self):
        """Model with dx and dt halved."""
        return self.with_(cells_per_L=2 * int(self.cells_per_L), dt_target=self.dt / 2 * (1 + 1e-9),
                          sample_every=2 * self.sample_every,
                          delta_width=None if self.delta_width is None else self.delta_width / 2)
