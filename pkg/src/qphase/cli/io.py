"""Deterministic CSV/JSON writers and the run manifest."""
import csv
import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .. import __version__

OUT_DIR_ENV = "QPHASE_OUT_DIR"


def fmt(x):
    """17 significant digits: round-trips every double."""
    if x is None:
        return ""
    return format(float(x) + 0.0, ".17g")


def write_csv(path, columns):
    """Write ``columns`` (ordered mapping name -> 1-D array) with LF line endings."""
    names = list(columns)
    cols = [np.asarray(columns[n]) for n in names]
    n = len(cols[0]) if cols else 0
    if any(len(c) != n for c in cols):
        raise ValueError("CSV columns differ in length")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for i in range(n):
            w.writerow([fmt(c[i]) for c in cols])


def write_rows(path, header, rows):
    """Write pre-formatted rows (lists of str) with LF line endings."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def to_jsonable(obj):
    """Convert numpy scalars, complex numbers and tuples for ``json``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else None
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps(obj))


def run_id_for(snapshot):
    """Content hash of the canonical config snapshot and the engine version."""
    blob = json.dumps(to_jsonable({"config": snapshot, "engine_version": __version__}),
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def output_root(out=None):
    return Path(out or os.environ.get(OUT_DIR_ENV) or "qphase_out")


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    """Provenance record of one run; the only file that carries timestamps."""

    run_id: str
    config_snapshot: dict
    engine_version: str = __version__
    timestamps: dict = field(default_factory=dict)
    convergence_metadata: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)

    def start(self):
        self.timestamps["started"] = _now()

    def finish(self, run_dir):
        self.timestamps["finished"] = _now()
        write_json(Path(run_dir) / "manifest.json", {
            "run_id": self.run_id, "config_snapshot": self.config_snapshot,
            "engine_version": self.engine_version, "timestamps": self.timestamps,
            "convergence_metadata": self.convergence_metadata,
            "outputs": sorted(self.outputs)})


GNUPLOT_TEMPLATE = """set datafile separator ','
set key autotitle columnhead
set terminal pngcairo size 900,600
set output '{stem}.png'
set xlabel 't'
plot {plots}
"""


def write_gnuplot(path, csv_name, ycols):
    plots = ", ".join(f"'{csv_name}' using 1:{i} with lines" for i in ycols)
    Path(path).write_text(GNUPLOT_TEMPLATE.format(stem=Path(path).stem, plots=plots))
