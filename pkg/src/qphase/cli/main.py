"""Command-line entry point: ``qphase {scatter,dipole,oracle,sweep,converge}``."""
import argparse
import sys

from ..errors import ConfigurationError, QPhaseError
from .config import load_config
from .converge import run_converge
from .io import dumps, output_root
from .oracle_registry import REGISTRY
from .runner import execute
from .sweep import load_sweep, run_sweep


def _parser():
    p = argparse.ArgumentParser(prog="qphase", description="Entanglement-event phase simulator")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", required=True, help="run or sweep configuration file")
        sp.add_argument("--out", default=None, help="output root (default $QPHASE_OUT_DIR)")
        sp.add_argument("--override-validation", action="store_true",
                        help="accept W < 10L and sweeps above 1e5 runs")
        sp.add_argument("--seedless", action="store_true",
                        help="accepted for compatibility; every run is deterministic")

    for name in ("scatter", "dipole", "converge"):
        common(sub.add_parser(name))
    sw = sub.add_parser("sweep")
    common(sw)
    sw.add_argument("--max-parallel", type=int, default=None)
    orc = sub.add_parser("oracle", help="evaluate a closed form: oracle NAME --param value ...")
    orc.add_argument("name")
    orc.add_argument("params", nargs=argparse.REMAINDER)
    return p


def _oracle(name, params):
    if name not in REGISTRY:
        print(f"unknown formula {name!r}; known: {', '.join(sorted(REGISTRY))}", file=sys.stderr)
        return 2
    fn, required, defaults, text = REGISTRY[name]
    if len(params) % 2:
        raise ConfigurationError("parameters must be given as --name value pairs")
    values = dict(defaults)
    for key, raw in zip(params[::2], params[1::2]):
        if not key.startswith("--"):
            raise ConfigurationError(f"expected --name, got {key!r}")
        try:
            values[key[2:].replace("-", "_")] = float(raw)
        except ValueError:
            raise ConfigurationError(f"{key}: not a number: {raw!r}") from None
    missing = [r for r in required if r not in values]
    if missing:
        raise ConfigurationError(f"{name} needs --{' --'.join(missing)}")
    unknown = set(values) - set(required) - set(defaults)
    if unknown:
        raise ConfigurationError(f"{name} does not take {sorted(unknown)}")
    out = {"formula": name, "expression": text, "params": values}
    out.update(fn(values))
    sys.stdout.write(dumps(out))
    return 0


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "oracle":
            return _oracle(args.name, args.params)
        out = output_root(args.out)
        if args.command == "sweep":
            spec = load_sweep(args.config)
            index, rows = run_sweep(spec, out, args.override_validation, args.max_parallel)
            failed = sum(r[1] != "ok" for r in rows)
            print(f"{len(rows)} run(s), {failed} failed; index: {index}")
            return 0
        cfg = load_config(args.config)
        if args.command == "converge":
            return 0 if run_converge(cfg, out, args.override_validation)["passed"] else 4
        if cfg.kind != args.command:
            raise ConfigurationError(f"config describes a {cfg.kind} run, not {args.command}")
        res = execute(cfg, out, args.override_validation)
        if res.exit_code == 0:
            print(res.run_dir)
        return res.exit_code
    except QPhaseError as exc:
        print(f"qphase {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
