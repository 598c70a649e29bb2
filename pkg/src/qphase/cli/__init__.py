"""Command-line harness: configuration, run orchestration, sweeps and convergence ladders."""
from .config import RunConfig, load_config, parse_config  # noqa: F401
from .io import RunManifest, run_id_for  # noqa: F401
from .main import main  # noqa: F401
from .runner import RunResult, execute  # noqa: F401
from .sweep import SweepSpec, load_sweep, run_sweep  # noqa: F401
