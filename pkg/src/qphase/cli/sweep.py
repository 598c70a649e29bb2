"""Cartesian parameter sweeps over a base configuration."""
import configparser
import hashlib
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigurationError
from .config import load_config, parse_value
from .io import RunManifest, fmt, write_rows
from .runner import execute

MAX_RUNS = 100_000


@dataclass(frozen=True)
class SweepSpec:
    """Base config, axes as (parameter path, values) and the worker bound."""

    base: object
    axes: tuple
    max_parallel: int = 1

    def __post_init__(self):
        if self.max_parallel < 1:
            raise ConfigurationError("max_parallel must be >= 1")
        seen = [p for p, _ in self.axes]
        if len(set(seen)) != len(seen):
            raise ConfigurationError("duplicate sweep axis")
        for path, values in self.axes:
            if not values:
                raise ConfigurationError(f"axis {path} has no values")

    @property
    def size(self):
        n = 1
        for _, values in self.axes:
            n *= len(values)
        return n

    def cells(self):
        names = [p for p, _ in self.axes]
        for combo in itertools.product(*(v for _, v in self.axes)):
            cfg = self.base
            for path, value in zip(names, combo):
                cfg = cfg.with_override(path, value)
            yield dict(zip(names, combo)), cfg


def load_sweep(path):
    """Read ``[sweep] base = ...`` plus an ``[axes]`` section of comma lists."""
    path = Path(path)
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(path.read_text(), source=str(path))
    except (OSError, configparser.Error) as exc:
        raise ConfigurationError(f"cannot read sweep {path}: {exc}") from None
    if not cp.has_option("sweep", "base"):
        raise ConfigurationError("sweep file needs [sweep] base = <config path>")
    base = load_config(path.parent / cp.get("sweep", "base"))
    try:
        max_parallel = cp.getint("sweep", "max_parallel", fallback=1)
    except ValueError:
        raise ConfigurationError("max_parallel must be an integer") from None
    axes = []
    if cp.has_section("axes"):
        for key, raw in cp.items("axes"):
            values = tuple(parse_value(key, v.strip()) for v in raw.split(",") if v.strip())
            axes.append((key, values))
    return SweepSpec(base, tuple(axes), max_parallel)


def _cell(args):
    cfg, out_root, override = args
    res = execute(cfg, out_root, override, quiet=True)
    return res.exit_code, res.run_id, res.status, res.summary


def _scalars(summary):
    return {k: v for k, v in summary.items()
            if isinstance(v, (int, float)) and not isinstance(v, bool)}


def run_sweep(spec, out_root, override=False, max_parallel=None):
    """Run every cell, then aggregate one index row per run.

    Returns
    -------
    (index_path, rows) : tuple
    """
    n = spec.size
    print(f"sweep: {n} run(s) over {len(spec.axes)} axis/axes")
    if n > MAX_RUNS and not override:
        raise ConfigurationError(f"sweep has {n} runs > {MAX_RUNS}; pass --override-validation")
    workers = max_parallel or spec.max_parallel
    cells = list(spec.cells())
    jobs = [(cfg, str(out_root), override) for _, cfg in cells]
    if workers == 1 or n == 1:
        results = [_cell(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell, jobs))

    axis_names = [p for p, _ in spec.axes]
    scalar_names = sorted(set().union(*(_scalars(r[3]) for r in results)))
    header = ["index", "status", "exit_code", "run_id"] + axis_names + scalar_names
    rows = []
    for i, ((values, _), (code, rid, status, summary)) in enumerate(zip(cells, results)):
        sc = _scalars(summary)
        row = [str(i), status, str(code), rid]
        row += [fmt(values[a]) if isinstance(values[a], (int, float)) else str(values[a])
                for a in axis_names]
        row += [fmt(sc[k]) if k in sc else "" for k in scalar_names]
        rows.append(row)

    snapshot = {"base": spec.base.snapshot(), "axes": [[p, list(v)] for p, v in spec.axes]}
    sid = hashlib.sha256(json.dumps(snapshot, sort_keys=True, default=str).encode()).hexdigest()[:16]
    sweep_dir = Path(out_root) / f"sweep-{sid}"
    sweep_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(sid, snapshot)
    manifest.start()
    write_rows(sweep_dir / "index.csv", header, rows)
    manifest.outputs.append("index.csv")
    manifest.convergence_metadata = {"runs": [r[1] for r in results]}
    manifest.finish(sweep_dir)
    return sweep_dir / "index.csv", rows
