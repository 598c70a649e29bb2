"""Acceptance suite: eleven end-to-end criteria, one PASS/FAIL line each.

Run with ``python3 -m qphase.acceptance [numbers...]``. Expensive runs are
computed once and shared between criteria.
"""
import math
import sys
import tempfile
import time
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from . import oracle
from .cli.config import parse_config
from .cli.runner import execute
from .dipole import (DipoleModel, SecondDipole, evolve_dipole, gedanken_run,
                     perturbation_energy_check, private_potential_difference,
                     stationary_phase_check, two_dipole_experiment, uncertainty_integrals)
from .scattering import (ScatteringModel, barrier_variant_phase,
                         momentum_transfer_and_path_integral, public_potential_probe,
                         run_scattering)
from .scattering.analysis import alpha_ladder, private_potential_consistency
from .scattering.stationary import continuum_delta_coeffs, lattice_delta_coeffs
from .scattering.engine import build_branch_potentials


@dataclass
class Criterion:
    number: int
    title: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f} s)"


def _wrap(phi):
    return float((phi + math.pi) % (2 * math.pi) - math.pi)


class Context:
    """Lazily computed runs shared by several criteria."""

    @cached_property
    def scatter_model(self):
        return ScatteringModel(alpha_tilde=200.0, L=1.0, W=50.0, p0=math.pi / 2)

    @cached_property
    def main_run(self):
        return run_scattering(self.scatter_model)

    @cached_property
    def dipole_model(self):
        return DipoleModel()

    @cached_property
    def gedanken(self):
        return gedanken_run(self.dipole_model)

    @cached_property
    def runs(self):
        """Every scattering report produced so far, for the property suite."""
        return [self.main_run]


# ------------------------------------------------------------------ criteria

def c1_smatrix(ctx):
    rows, worst = [], 0.0
    for a in (50.0, 200.0):
        ref = oracle.delta_coeffs(a, 1.0)
        model = ScatteringModel(alpha_tilde=a, p0=1.0)
        grid = model.grid()
        v1, _ = build_branch_potentials(model, grid)
        lat = lattice_delta_coeffs(v1, grid.x, 1.0)
        cont = continuum_delta_coeffs(a, 1.0, 1.25e-4)
        for name, c in (("lattice", lat), ("continuum", cont)):
            ea = abs(c.A - ref.A) / abs(ref.A)
            eb = abs(c.B - ref.B) / abs(ref.B)
            worst = max(worst, ea, eb)
            rows.append(f"{name}@{a:g}: dA={ea:.1e} dB={eb:.1e}")
    return worst < 0.01, "; ".join(rows), {"max_rel_err": worst}


def c2_ramp(ctx):
    rep = ctx.main_run
    sup = rep.ramp_error()
    dphi = abs(_wrap(rep.final_phase - math.pi))
    ok = sup < 0.05 and dphi < 0.05
    return ok, (f"sup|D - ramp| = {sup:.4f} (limit 0.05), |final phase - pi| = {dphi:.2e} "
                f"(limit 0.05)"), {"sup_error": sup, "phase_error": dphi}


def c3_private(ctx):
    pc = private_potential_consistency(ctx.main_run)
    ok = pc["plateau_rel_gap"] < 0.10 and pc["max_abs_gap"] < 1e-4
    return ok, (f"plateau rel gap = {pc['plateau_rel_gap']:.3f} (limit 0.10), "
                f"|dD/dt - P| max = {pc['max_abs_gap']:.2e} (limit 1e-4)"), pc


def c4_cancellation(ctx):
    rep = ctx.main_run
    pc = rep.potential_cancellation()
    shift = abs(_wrap(float(rep.unwrapped_phase[-1] - rep.unwrapped_phase[0])))
    ok = pc["same_time"] < 1e-6 and abs(shift - math.pi) < 0.05
    return ok, (f"max|<V1>_1 - <V2>_2| = {pc['same_time']:.2e} (limit 1e-6; delay-matched "
                f"{pc['delay_matched']:.2e}), |arg D| shift = {shift:.4f}"), pc | {"shift": shift}


def c5_path_integral(ctx):
    m = ctx.scatter_model
    target = 2 * m.p0 * m.L
    fm = momentum_transfer_and_path_integral(m, np.linspace(0.0, m.L, 9))
    rel = abs(fm.phase_estimate - target) / target
    parts = [f"9-point integral {fm.phase_estimate:.4f} vs {target:.4f} (rel {rel:.3f})"]
    ok = rel < 0.05
    rels = {"path_integral": rel}
    for frac in (0.25, 0.5, 0.75):
        mv = m.with_(barrier_L1=frac * m.L)
        phi = barrier_variant_phase(mv)
        want = 2 * m.p0 * frac * m.L
        r = abs(_wrap(phi - want)) / want
        rels[f"L1={frac}"] = r
        ok = ok and r < 0.05
        parts.append(f"L1={frac:g}L rel {r:.3f}")
    return ok, "; ".join(parts), rels


def c6_probe(ctx):
    m = ctx.scatter_model
    eps = 1e-2
    val = public_potential_probe(m, eps, -5.0)
    want = eps / m.v0
    rel = abs(val - want) / want
    return rel < 0.05, f"probe phase {val:.6f} vs eps/v0 {want:.6f} (rel {rel:.2e})", {"rel": rel}


def c7_dipole(ctx):
    t0 = time.perf_counter()
    gk = ctx.gedanken
    dt = time.perf_counter() - t0
    ok = gk.max_delta < 2 * math.pi * 1e-2 and abs(gk.R_final) >= 0.999
    return ok, (f"phi exact {gk.phi_exact:.5f}, oracle {gk.phi_oracle:.5f}, force "
                f"{gk.phi_force:.5f}, max delta {gk.max_delta:.2e}, |R| {abs(gk.R_final):.7f}, "
                f"phi0 {gk.phi0:g}, pipeline {dt:.1f} s"), gk.as_dict()


def c8_quadrature(ctx):
    m = ctx.dipole_model
    s = m.schedule
    times = np.linspace(s.t1p + 1.0, s.t2p - 1.0, 12)
    worst = 0.0
    for t in times:
        q, c = private_potential_difference(m, t)
        worst = max(worst, abs(q - c) / abs(c))
    errs = []
    for dz in (0.1, 0.05, 0.025):
        a, b = perturbation_energy_check(m, 1.5, dz)
        errs.append(abs(a - b))
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    ok = worst < 1e-6 and all(abs(r - 4) <= 0.5 for r in ratios)
    return ok, (f"max rel gap {worst:.1e} over 12 times (limit 1e-6); error ratios "
                f"{ratios[0]:.3f}, {ratios[1]:.3f}"), {"rel_gap": worst, "ratios": ratios}


def c9_uncertainty(ctx):
    m = ctx.dipole_model
    finals = []
    for eps in (0.02, 0.01):
        mm = m.with_schedule(eps=eps)
        finals.append(float(uncertainty_integrals(mm, [mm.schedule.t2p + 10.0]).delta_phi_sq[0]))
    mid = 0.5 * (m.schedule.t1 + m.schedule.t2)
    plateau = float(uncertainty_integrals(m, [mid]).delta_phi_sq[0])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sp = stationary_phase_check(m)
    ok = finals[0] < 1e-3 and finals[1] < finals[0] and plateau > 0 and sp.constant <= 1.0
    return ok, (f"delta_phi_sq(inf) = {finals[0]:.2e} -> {finals[1]:.2e} under eps halving, "
                f"plateau {plateau:.3e}, stationary-phase rel gap {sp.rel_gap:.2e} = "
                f"{sp.constant:.4f} x eps/omega"), {
                    "final": finals, "plateau": plateau, "sp_constant": sp.constant}


def c10_two_dipole(ctx):
    m = DipoleModel(alpha=5.0, beta=2.0, second_dipole=SecondDipole(1.0, 1.0))
    r = two_dipole_experiment(m)
    closed = oracle.balance_details(5.0, 1.0, 2.0, 1.0)
    ok = (r.residual < 1e-12 and abs(r.dU - 0.0314) < 5e-4 and abs(r.dU - closed.dU) < 1e-12
          and r.off_plateau_fails)
    return ok, (f"z~ = {r.z_balance:.6f}, gf = {r.gf_balance:.6f}, residual {r.residual:.1e}, "
                f"dU = {r.dU:.6f}, off-plateau residual {r.off_plateau_residual:.3f}"), r.as_dict()


_SCATTER_INI = """[scatter]
alpha_tilde = 200
L = 1
W = 50
p0 = 1.5707963267948966
"""


def c11_properties(ctx):
    ladder_model = ScatteringModel(alpha_tilde=200.0, p0=math.pi / 4)
    rows, monotone = alpha_ladder(ladder_model)
    reports = [ctx.main_run]
    drift = max(abs(d) for r in reports for d in r.norm_drift)
    dmax = max(float(np.max(np.abs(r.overlap))) for r in reports)
    dip = evolve_dipole(ctx.dipole_model, ctx.dipole_model.z2, tol=1e-10)
    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        cfg = parse_config(_SCATTER_INI)
        ra, rb = execute(cfg, a, quiet=True), execute(cfg, b, quiet=True)
        same = all((ra.run_dir / f).read_bytes() == (rb.run_dir / f).read_bytes()
                   for f in ("scatter.csv", "summary.json"))
    devs = [r["deviation"] for r in rows]
    ok = drift < 1e-9 and dip.norm_drift < 1e-9 and dmax <= 1 + 1e-12 and same and monotone
    return ok, (f"norm drift {drift:.1e} (dipole {dip.norm_drift:.1e}), max|D| {dmax:.12f}, "
                f"byte-identical re-run {same}, alpha ladder deviations "
                f"{', '.join(f'{d:.2e}' for d in devs)} monotone {monotone}"), {
                    "norm_drift": drift, "dipole_norm_drift": dip.norm_drift, "max_abs_D": dmax,
                    "deterministic": same, "ladder": rows, "monotone": monotone}


CRITERIA = (
    (1, "delta-barrier S-matrix", c1_smatrix),
    (2, "decoherence ramp", c2_ramp),
    (3, "private potential plateau", c3_private),
    (4, "first-paradox cancellation", c4_cancellation),
    (5, "path-integral equivalence", c5_path_integral),
    (6, "test-particle phase", c6_probe),
    (7, "dipole adiabatic pipeline", c7_dipole),
    (8, "quadrature identity", c8_quadrature),
    (9, "uncertainty claims", c9_uncertainty),
    (10, "two-dipole vacuum", c10_two_dipole),
    (11, "property suites", c11_properties),
)


def run_acceptance(numbers=None, ctx=None, stream=sys.stdout):
    """Evaluate the selected criteria (all by default) and print one line each."""
    ctx = ctx or Context()
    out = []
    for number, title, fn in CRITERIA:
        if numbers and number not in numbers:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail, metrics = fn(ctx)
        except Exception as exc:  # a crash is a failed criterion, not a crashed suite
            ok, detail, metrics = False, f"{type(exc).__name__}: {exc}", {}
        res = Criterion(number, title, bool(ok), detail, metrics, time.perf_counter() - t0)
        out.append(res)
        if stream is not None:
            print(res.line(), file=stream, flush=True)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    numbers = {int(a) for a in argv} or None
    results = run_acceptance(numbers)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failing: {failed}" if failed else ""))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
