import csv
import json
import math

import pytest

from qphase.cli import main, parse_config
from qphase.cli.config import scatter_model
from qphase.cli.io import fmt, run_id_for
from qphase.errors import ConfigurationError

SMALL_SCATTER = """[scatter]
alpha_tilde = 200
L = 1
W = 8
p0 = 1.5707963267948966
margin = 6
cells_per_L = 32
"""

FAST_DIPOLE = """[dipole]
alpha = 1
dt_sample = 1.0
z_nodes = 12

[schedule]
g0 = 1
eps = 0.05
t1 = 0
t2 = 10
"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _run_dirs(root, prefix):
    return sorted(p for p in root.iterdir() if p.name.startswith(prefix))


# ---------------------------------------------------------------- config

def test_parse_config_types_and_kind():
    cfg = parse_config(SMALL_SCATTER)
    assert cfg.kind == "scatter"
    assert cfg.section("scatter")["cells_per_L"] == 32
    m = scatter_model(cfg, override_validation=True)
    assert m.W == 8.0 and m.allow_narrow


@pytest.mark.parametrize("text", [
    "[scatter]\nbogus = 1\n",
    "[nope]\na = 1\n",
    "[scatter]\nW = abc\n",
    "[scatter]\nW = 50\n[dipole]\nalpha = 1\n",
    "[scatter]\nW = inf\n",
])
def test_parse_config_rejects(text):
    with pytest.raises(ConfigurationError):
        parse_config(text)


def test_override_paths():
    cfg = parse_config(SMALL_SCATTER).with_override("scatter.alpha_tilde", 50.0)
    assert cfg.section("scatter")["alpha_tilde"] == 50.0
    with pytest.raises(ConfigurationError):
        cfg.with_override("scatter.nothing", 1.0)


def test_run_id_depends_only_on_content():
    a = parse_config(SMALL_SCATTER).snapshot()
    b = parse_config("# comment\n" + SMALL_SCATTER).snapshot()
    assert run_id_for(a) == run_id_for(b)
    c = parse_config(SMALL_SCATTER.replace("200", "100")).snapshot()
    assert run_id_for(a) != run_id_for(c)


def test_fmt_round_trips():
    for x in (math.pi, 1e-300, -0.0, 123456789.123456789):
        assert float(fmt(x)) == x
    assert fmt(-0.0) == "0"


# ---------------------------------------------------------------- oracle

def test_oracle_bo_phase(capsys):
    assert main(["oracle", "bo-phase", "--alpha", "1", "--gf", "1", "--T", "10"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == pytest.approx(4.1421356, abs=1e-7)
    assert "sqrt" in out["expression"]


def test_oracle_ramp_and_unknown(capsys):
    assert main(["oracle", "ramp-overlap", "--W", "50", "--v0", "1", "--p0", "1",
                 "--L", "1", "--t", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == [1.0, 0.0]
    assert main(["oracle", "no-such"]) == 2
    assert "bo-phase" in capsys.readouterr().err
    assert main(["oracle", "bo-phase", "--alpha", "1"]) == 2


# ---------------------------------------------------------------- scatter

def test_scatter_narrow_rejected(tmp_path, capsys):
    cfg = _write(tmp_path, "s.ini", SMALL_SCATTER)
    assert main(["scatter", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "W >= 10L" in capsys.readouterr().err


def test_scatter_run_and_determinism(tmp_path):
    cfg = _write(tmp_path, "s.ini", SMALL_SCATTER + "\n[output]\ngnuplot = true\n")
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["scatter", "--config", cfg, "--out", str(out), "--override-validation"]) == 0
    da, db = _run_dirs(a, "scatter-")[0], _run_dirs(b, "scatter-")[0]
    assert da.name == db.name
    for f in ("scatter.csv", "summary.json"):
        assert (da / f).read_bytes() == (db / f).read_bytes()
    raw = (da / "scatter.csv").read_bytes()
    assert b"\r\n" not in raw
    manifest = json.loads((da / "manifest.json").read_text())
    assert sorted(manifest["outputs"]) == ["plot.gp", "scatter.csv", "summary.json"]
    assert {p.name for p in da.iterdir()} == set(manifest["outputs"]) | {"manifest.json"}
    summary = json.loads((da / "summary.json").read_text())
    assert summary["status"] == "ok" and summary["phase_error"] < 0.05
    assert "started" in manifest["timestamps"] and "started" not in (da / "summary.json").read_text()


def test_scatter_boundary_breach_exit_3(tmp_path):
    cfg = _write(tmp_path, "s.ini", SMALL_SCATTER + "t_final = 200\n")
    assert main(["scatter", "--config", cfg, "--out", str(tmp_path), "--override-validation"]) == 3
    summary = json.loads((_run_dirs(tmp_path, "scatter-")[0] / "summary.json").read_text())
    assert summary["error_type"] == "BoundaryContaminationError"


def test_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("QPHASE_OUT_DIR", str(tmp_path / "env"))
    cfg = _write(tmp_path, "d.ini", FAST_DIPOLE.replace("z_nodes = 12", "uncertainty = false"))
    assert main(["dipole", "--config", cfg, "--seedless"]) == 0
    assert _run_dirs(tmp_path / "env", "dipole-")


# ---------------------------------------------------------------- dipole

def test_dipole_run(tmp_path):
    cfg = _write(tmp_path, "d.ini", FAST_DIPOLE)
    assert main(["dipole", "--config", cfg, "--out", str(tmp_path)]) == 0
    d = _run_dirs(tmp_path, "dipole-")[0]
    summary = json.loads((d / "summary.json").read_text())
    assert summary["max_delta"] < 2 * math.pi * 1e-2
    with open(d / "dipole.csv") as fh:
        header = next(csv.reader(fh))
    assert header[:5] == ["t", "g", "E1", "E2", "R"]
    assert {"I2", "I3", "delta_phi_sq", "delta_phi"} <= set(header)


def test_dipole_nonadiabatic_exit_4(tmp_path, capsys):
    cfg = _write(tmp_path, "d.ini", "[dipole]\nuncertainty = false\n[schedule]\neps = 0.5\n")
    assert main(["dipole", "--config", cfg, "--out", str(tmp_path)]) == 4
    assert "|R(t_final)|" in capsys.readouterr().err


def test_two_dipole_infeasible_exit_2(tmp_path, capsys):
    cfg = _write(tmp_path, "d.ini", "[dipole]\nalpha = 1\nbeta = 2\nuncertainty = false\n"
                 "[second_dipole]\nalpha2 = 5\nbeta2 = 1\n")
    assert main(["dipole", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert ">= 0" in capsys.readouterr().err


def test_wrong_subcommand_for_config(tmp_path):
    cfg = _write(tmp_path, "d.ini", FAST_DIPOLE)
    assert main(["scatter", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert main(["dipole", "--config", str(tmp_path / "missing.ini")]) == 2


# ---------------------------------------------------------------- sweep and converge

def test_sweep_with_failing_cell(tmp_path):
    base = _write(tmp_path, "d.ini", FAST_DIPOLE.replace("z_nodes = 12", "uncertainty = false"))
    sweep = _write(tmp_path, "sw.ini", "[sweep]\nbase = d.ini\n[axes]\nschedule.eps = 0.05, 0.5\n")
    assert main(["sweep", "--config", sweep, "--out", str(tmp_path / "o")]) == 0
    index = _run_dirs(tmp_path / "o", "sweep-")[0] / "index.csv"
    rows = list(csv.DictReader(open(index)))
    assert [r["status"] for r in rows] == ["ok", "error:AdiabaticityError"]
    assert rows[1]["exit_code"] == "4"
    assert base


def test_sweep_empty_axes_matches_single_run(tmp_path):
    _write(tmp_path, "d.ini", FAST_DIPOLE.replace("z_nodes = 12", "uncertainty = false"))
    sweep = _write(tmp_path, "sw.ini", "[sweep]\nbase = d.ini\n")
    assert main(["sweep", "--config", sweep, "--out", str(tmp_path / "a")]) == 0
    assert main(["dipole", "--config", str(tmp_path / "d.ini"), "--out", str(tmp_path / "b")]) == 0
    da = _run_dirs(tmp_path / "a", "dipole-")[0]
    db = _run_dirs(tmp_path / "b", "dipole-")[0]
    assert da.name == db.name
    assert (da / "dipole.csv").read_bytes() == (db / "dipole.csv").read_bytes()


def test_sweep_size_guard(tmp_path):
    _write(tmp_path, "d.ini", FAST_DIPOLE)
    values = ", ".join(str(0.01 + 1e-6 * i) for i in range(400))
    sweep = _write(tmp_path, "sw.ini", "[sweep]\nbase = d.ini\n[axes]\n"
                   f"schedule.eps = {values}\nschedule.g0 = {values}\n")
    assert main(["sweep", "--config", sweep, "--out", str(tmp_path)]) == 2


def test_converge_dipole_order(tmp_path, capsys):
    cfg = _write(tmp_path, "d.ini", FAST_DIPOLE + "[converge]\ntols = 1e-5, 1e-6, 1e-7, 1e-8\n")
    assert main(["converge", "--config", cfg, "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "observed order" in out


def test_converge_scatter_reports_drift(tmp_path, capsys):
    coarse = SMALL_SCATTER.replace("cells_per_L = 32", "cells_per_L = 8") + \
        "check_reflection = false\n"
    cfg = _write(tmp_path, "s.ini", coarse)
    assert main(["converge", "--config", cfg, "--out", str(tmp_path),
                 "--override-validation"]) == 0
    out = capsys.readouterr().out
    assert "phase drift per halving" in out and "needs 3 levels" in out
    assert (_run_dirs(tmp_path, "converge-")[0] / "converge.json").exists()
