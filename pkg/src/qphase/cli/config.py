"""Flat sectioned key = value run configuration."""
import configparser
import math
from dataclasses import dataclass
from pathlib import Path

from ..dipole import DipoleModel, SecondDipole
from ..errors import ConfigurationError
from ..scattering import ScatteringModel
from ..schedule import SwitchingSchedule


def _bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _float(text):
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(f"not a finite number: {text!r}")
    return v


def _optional(parse):
    def inner(text):
        return None if text.strip().lower() in ("", "none") else parse(text)
    return inner


def _float_list(text):
    return tuple(_float(v) for v in text.split(",") if v.strip())


def _choice(*options):
    def inner(text):
        v = text.strip()
        if v not in options:
            raise ValueError(f"expected one of {options}, got {v!r}")
        return v
    return inner


# section -> key -> parser; keys are case sensitive
SCHEMA = {
    "run": {"kind": _choice("scatter", "dipole")},
    "scatter": {
        "alpha_tilde": _float, "L": _float, "W": _float, "p0": _float,
        "barrier_L1": _optional(_float), "delta_width": _optional(_float),
        "packet_shape": _choice("flat_top", "gaussian"), "packet_order": int, "margin": _float,
        "cells_per_L": int, "dt_target": _float, "sample_every": int,
        "wall_height_factor": _float, "absorb_fraction": _float, "mass": _float,
        "t_final": _optional(_float), "backend": _choice("auto", "numba", "numpy"),
        "check_reflection": _bool,
    },
    "dipole": {
        "alpha": _float, "Qe": _float, "beta": _float, "z1": _float, "z2": _float,
        "cage_radius": _float, "cage_transition": _float,
        "table_z": _optional(_float_list), "table_f": _optional(_float_list),
        "tol": _float, "dt_sample": _float, "uncertainty": _bool, "z_nodes": int,
        "consistency_tol": _float, "min_adiabaticity": _float,
    },
    "schedule": {"g0": _float, "eps": _float, "t1": _float, "t2": _float, "cutoff": _float},
    "second_dipole": {"alpha2": _float, "beta2": _float,
                      "initial_state": _choice("ground", "excited")},
    "output": {"gnuplot": _bool},
    "converge": {"levels": int, "max_drift": _float, "tols": _float_list},
}

SCATTER_MODEL_KEYS = ("alpha_tilde", "L", "W", "p0", "barrier_L1", "delta_width", "packet_shape",
                      "packet_order", "margin", "cells_per_L", "dt_target", "sample_every",
                      "wall_height_factor", "absorb_fraction", "mass")
DIPOLE_MODEL_KEYS = ("alpha", "Qe", "beta", "z1", "z2", "cage_radius", "cage_transition",
                     "table_z", "table_f")
DIPOLE_RUN_DEFAULTS = {"tol": 1e-10, "dt_sample": 0.25, "uncertainty": True, "z_nodes": 24,
                       "consistency_tol": 2 * math.pi * 1e-2, "min_adiabaticity": 10.0}
SCATTER_RUN_DEFAULTS = {"t_final": None, "backend": "auto", "check_reflection": True}


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration: run kind plus typed section dictionaries."""

    kind: str
    sections: dict

    def section(self, name):
        return dict(self.sections.get(name, {}))

    def snapshot(self):
        """Plain nested dict used for hashing and the manifest."""
        return {"kind": self.kind,
                "sections": {s: dict(sorted(v.items())) for s, v in sorted(self.sections.items())}}

    def with_override(self, path, value):
        """Copy with ``section.key`` replaced by an already-typed value."""
        section, _, key = path.partition(".")
        if section not in SCHEMA or key not in SCHEMA[section]:
            raise ConfigurationError(f"unknown parameter path {path!r}")
        sections = {s: dict(v) for s, v in self.sections.items()}
        sections.setdefault(section, {})[key] = value
        return RunConfig(self.kind, sections)


def parse_value(path, text):
    section, _, key = path.partition(".")
    try:
        return SCHEMA[section][key](text)
    except KeyError:
        raise ConfigurationError(f"unknown parameter path {path!r}") from None
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None


def parse_config(text, source="<string>"):
    """Parse config text; unknown sections or keys are errors."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from None
    sections = {}
    for name in cp.sections():
        if name not in SCHEMA:
            raise ConfigurationError(f"{source}: unknown section [{name}]")
        sections[name] = {key: parse_value(f"{name}.{key}", raw) for key, raw in cp.items(name)}
    kind = sections.pop("run", {}).get("kind")
    if kind is None:
        has = [k for k in ("scatter", "dipole") if k in sections]
        if len(has) != 1:
            raise ConfigurationError(f"{source}: set [run] kind or give exactly one of "
                                     "[scatter] / [dipole]")
        kind = has[0]
    return RunConfig(kind, sections)


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, str(path))


def scatter_model(cfg, override_validation=False):
    sec = cfg.section("scatter")
    kw = {k: sec[k] for k in SCATTER_MODEL_KEYS if k in sec}
    kw["allow_narrow"] = bool(override_validation)
    return ScatteringModel(**kw)


def scatter_options(cfg):
    sec = cfg.section("scatter")
    return {k: sec.get(k, v) for k, v in SCATTER_RUN_DEFAULTS.items()}


def dipole_model(cfg):
    sec = cfg.section("dipole")
    kw = {k: sec[k] for k in DIPOLE_MODEL_KEYS if k in sec}
    sched = {"g0": 1.0, "eps": 0.02, "t1": 0.0, "t2": 10.0}
    sched.update(cfg.section("schedule"))
    kw["schedule"] = SwitchingSchedule(**sched)
    if "second_dipole" in cfg.sections:
        sd = cfg.section("second_dipole")
        missing = {"alpha2", "beta2"} - sd.keys()
        if missing:
            raise ConfigurationError(f"[second_dipole] is missing {sorted(missing)}")
        kw["second_dipole"] = SecondDipole(**sd)
    return DipoleModel(**kw)


def dipole_options(cfg):
    sec = cfg.section("dipole")
    return {k: sec.get(k, v) for k, v in DIPOLE_RUN_DEFAULTS.items()}
