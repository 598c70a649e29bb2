"""Refinement ladders: lattice halving for scattering, tolerance ladder for the dipole."""
import math
from pathlib import Path

import numpy as np

from ..dipole import evolve_dipole
from ..dipole.engine import default_times
from ..scattering import run_scattering
from .config import dipole_model, scatter_model, scatter_options
from .io import RunManifest, run_id_for, write_json

SCATTER_MAX_DRIFT = 1e-3
DIPOLE_TOLS = (1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10)
DIPOLE_REFERENCE_TOL = 1e-11
# DOP853 is eighth order; the fitted slope must land within this of it
INTEGRATOR_ORDER = 8.0
ORDER_WINDOW = 1.5


def _wrap(phi):
    return float((phi + math.pi) % (2 * math.pi) - math.pi)


def converge_scatter(cfg, override=False):
    """Halve dx and dt ``levels - 1`` times and track the final phase."""
    conv = cfg.section("converge")
    levels = conv.get("levels", 2)
    max_drift = conv.get("max_drift", SCATTER_MAX_DRIFT)
    opts = scatter_options(cfg)
    backend = None if opts["backend"] == "auto" else opts["backend"]
    model = scatter_model(cfg, override)
    rows = []
    for k in range(levels):
        rep = run_scattering(model, t_final=opts["t_final"], backend=backend,
                             check_reflection=opts["check_reflection"])
        rows.append({"level": k, "dx": model.dx, "dt": model.dt, "final_phase": rep.final_phase,
                     "ramp_sup_error": rep.ramp_error()})
        print(f"level {k}: dx={model.dx:.6g} dt={model.dt:.6g} "
              f"phase={rep.final_phase:.10f} ramp_err={rows[-1]['ramp_sup_error']:.6g}")
        model = model.refined()
    drifts = [abs(_wrap(b["final_phase"] - a["final_phase"])) for a, b in zip(rows, rows[1:])]
    orders = [math.log2(a / b) if a > 0 and b > 0 else None for a, b in zip(drifts, drifts[1:])]
    passed = bool(drifts) and drifts[-1] < max_drift
    return {"kind": "scatter", "levels": rows, "phase_drift_per_halving": drifts,
            "observed_orders": orders, "max_drift": max_drift, "passed": passed}


def converge_dipole(cfg):
    """Error of the final z2 state against a tight reference, fitted against work."""
    conv = cfg.section("converge")
    tols = conv.get("tols", DIPOLE_TOLS)
    model = dipole_model(cfg)
    times = default_times(model)
    ref = evolve_dipole(model, model.z2, DIPOLE_REFERENCE_TOL, times)
    rows = []
    for tol in tols:
        tr = evolve_dipole(model, model.z2, tol, times)
        err = float(np.max(np.abs(tr.states[-1] - ref.states[-1])))
        rows.append({"tol": tol, "nfev": tr.nfev, "final_state_error": err,
                     "norm_drift": tr.norm_drift})
        print(f"tol {tol:.0e}: nfev={tr.nfev} error={err:.3e} norm_drift={tr.norm_drift:.3e}")
    nfev = np.array([r["nfev"] for r in rows], dtype=float)
    err = np.array([r["final_state_error"] for r in rows])
    ok = err > 0
    order = float(-np.polyfit(np.log(nfev[ok]), np.log(err[ok]), 1)[0]) if ok.sum() >= 2 else None
    passed = order is not None and abs(order - INTEGRATOR_ORDER) <= ORDER_WINDOW
    return {"kind": "dipole", "levels": rows, "observed_order": order,
            "integrator_order": INTEGRATOR_ORDER, "passed": passed}


def run_converge(cfg, out_root, override=False):
    report = converge_scatter(cfg, override) if cfg.kind == "scatter" else converge_dipole(cfg)
    if cfg.kind == "scatter":
        orders = ", ".join("n/a" if o is None else f"{o:.2f}" for o in report["observed_orders"])
        print(f"phase drift per halving: {report['phase_drift_per_halving']}; "
              f"observed orders: {orders or 'n/a (needs 3 levels)'}")
    else:
        print(f"observed order {report['observed_order']:.2f} "
              f"(integrator order {INTEGRATOR_ORDER:g})")
    print("PASS" if report["passed"] else "FAIL")
    snapshot = {"converge": cfg.snapshot(), "override_validation": bool(override)}
    rid = run_id_for(snapshot)
    run_dir = Path(out_root) / f"converge-{rid}"
    run_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(rid, snapshot)
    manifest.start()
    write_json(run_dir / "converge.json", report)
    manifest.outputs.append("converge.json")
    manifest.convergence_metadata = {"passed": report["passed"]}
    manifest.finish(run_dir)
    return report
