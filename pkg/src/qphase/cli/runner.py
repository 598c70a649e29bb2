"""Single-run orchestration shared by the scatter, dipole and sweep commands."""
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..dipole import gedanken_run, stationary_phase_check, two_dipole_experiment
from ..dipole import uncertainty_integrals
from ..dipole.engine import default_times
from ..errors import QPhaseError
from ..scattering import run_scattering
from ..scattering.analysis import private_potential_consistency
from .config import dipole_model, dipole_options, scatter_model, scatter_options
from .io import RunManifest, run_id_for, write_csv, write_gnuplot, write_json


@dataclass(frozen=True)
class RunResult:
    exit_code: int
    run_id: str
    run_dir: Path
    summary: dict

    @property
    def status(self):
        return "ok" if self.exit_code == 0 else f"error:{self.summary.get('error_type', '')}"


def _wrap(phi):
    return float((phi + math.pi) % (2 * math.pi) - math.pi)


def _scatter(cfg, run_dir, override, manifest):
    model = scatter_model(cfg, override)
    opts = scatter_options(cfg)
    backend = None if opts["backend"] == "auto" else opts["backend"]
    rep = run_scattering(model, t_final=opts["t_final"], backend=backend,
                         check_reflection=opts["check_reflection"])
    oracle_D = rep.oracle_overlap()
    write_csv(run_dir / "scatter.csv", {
        "t": rep.times, "D_re": rep.overlap.real, "D_im": rep.overlap.imag,
        "D_abs": np.abs(rep.overlap), "D_arg": rep.unwrapped_phase,
        "oracle_re": oracle_D.real, "oracle_im": oracle_D.imag,
        "private_re": rep.private_potential.real, "private_im": rep.private_potential.imag,
        "V1_mean": rep.mean_potential_1, "V2_mean": rep.mean_potential_2,
        "dp1": rep.momentum_transfer_1, "dp2": rep.momentum_transfer_2,
    })
    manifest.outputs.append("scatter.csv")
    target = (2 * model.p0 * model.L) % (2 * math.pi)
    manifest.convergence_metadata = {"dx": model.dx, "dt": model.dt,
                                     "n_points": model.grid().n_points,
                                     "reflection_gate": rep.reflection_gate}
    return {
        "final_phase": rep.final_phase, "target_phase": target,
        "phase_error": abs(_wrap(rep.final_phase - target)),
        "final_overlap": rep.final_overlap, "final_overlap_abs": abs(rep.final_overlap),
        "ramp_sup_error": rep.ramp_error(), "W_eff": rep.W_eff, "T": rep.T,
        "t_start": rep.t_start, "potential_cancellation": rep.potential_cancellation(),
        "private_potential": private_potential_consistency(rep),
        "norm_drift": list(rep.norm_drift), "norm_drift_max": max(map(abs, rep.norm_drift)),
        "absorbed_probability": rep.absorbed_probability,
        "momentum_transfer_final": float(rep.momentum_transfer_1[-1]),
        "force_path_integral": rep.force_path_integral,
        "backend": rep.backend,
    }


def _dipole(cfg, run_dir, override, manifest):
    model = dipole_model(cfg)
    opts = dipole_options(cfg)
    summary = {}
    if model.second_dipole is not None:
        summary["two_dipole"] = two_dipole_experiment(model).as_dict()
    times = default_times(model, dt=opts["dt_sample"])
    gk = gedanken_run(model, tol=opts["tol"], consistency_tol=opts["consistency_tol"],
                      times=times, min_adiabaticity=opts["min_adiabaticity"])
    tr = gk.trajectory
    cols = {"t": tr.times, "g": model.schedule.g(tr.times),
            "E1": tr.energies[:, 0], "E2": tr.energies[:, 1], "R": tr.R, "R_exact": tr.R_exact,
            "factor_re": tr.total_factor.real, "factor_im": tr.total_factor.imag,
            "phi_rel": tr.phi_rel}
    summary.update(gk.as_dict())
    summary["adiabatic_error"] = tr.adiabatic_error
    if opts["uncertainty"]:
        unc = uncertainty_integrals(model, tr.times, tol=opts["tol"], n_per_segment=opts["z_nodes"])
        cols.update({"I2": unc.I2, "I3": unc.I3, "delta_phi_sq": unc.delta_phi_sq,
                     "delta_phi": unc.delta_phi})
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sp = stationary_phase_check(model)
        mid = 0.5 * (model.schedule.t1 + model.schedule.t2)
        summary["uncertainty"] = {
            "delta_phi_sq_final": float(unc.delta_phi_sq[-1]),
            "delta_phi_final": float(unc.delta_phi[-1]),
            "delta_phi_sq_plateau_mid": float(np.interp(mid, unc.times, unc.delta_phi_sq)),
            "stationary_phase_rel_gap": sp.rel_gap, "stationary_phase_constant": sp.constant}
    write_csv(run_dir / "dipole.csv", cols)
    manifest.outputs.append("dipole.csv")
    manifest.convergence_metadata = {"tol": opts["tol"], "dt_sample": opts["dt_sample"],
                                     "z_nodes": opts["z_nodes"]}
    return summary


_GNUPLOT_COLUMNS = {"scatter": ("scatter.csv", (2, 3, 6, 7)), "dipole": ("dipole.csv", (6, 7))}


def execute(cfg, out_root, override=False, quiet=False):
    """Run one configuration into ``out_root/<kind>-<run_id>``.

    Errors are caught, summarized in the JSON and mapped to their exit code.
    """
    snapshot = cfg.snapshot()
    snapshot["override_validation"] = bool(override)
    rid = run_id_for(snapshot)
    run_dir = Path(out_root) / f"{cfg.kind}-{rid}"
    run_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(rid, snapshot)
    manifest.start()
    body = _scatter if cfg.kind == "scatter" else _dipole
    try:
        summary = body(cfg, run_dir, override, manifest)
        summary["status"] = "ok"
        code = 0
    except QPhaseError as exc:
        code = exc.exit_code
        summary = {"status": "error", "error_type": type(exc).__name__, "message": str(exc),
                   "values": getattr(exc, "values", {})}
        if not quiet:
            print(f"qphase {cfg.kind}: {type(exc).__name__}: {exc}", file=sys.stderr)
    summary.update({"kind": cfg.kind, "run_id": rid})
    write_json(run_dir / "summary.json", summary)
    manifest.outputs.append("summary.json")
    if code == 0 and cfg.section("output").get("gnuplot", False):
        csv_name, ycols = _GNUPLOT_COLUMNS[cfg.kind]
        write_gnuplot(run_dir / "plot.gp", csv_name, ycols)
        manifest.outputs.append("plot.gp")
    manifest.finish(run_dir)
    return RunResult(code, rid, run_dir, summary)
