"""Crank-Nicolson step time: numba kernel vs the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--n 32768] [--steps 200] [--repeat 3]

Both backends advance the same packet on the same lattice; the script also
reports the largest difference between their results.
"""
import argparse
import time

import numpy as np

from qphase import _kernels
from qphase.grid import Grid1D
from qphase.propagate import CrankNicolson, absorbing_mask


def setup(n):
    grid = Grid1D(-200.0, 200.0, n)
    v = np.zeros(n)
    v[grid.index_of(0.0)] = 100.0 / grid.dx
    x = grid.x
    psi = np.exp(-((x + 60) / 20) ** 8 + 1j * (np.pi / 2) * x)
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx)
    return grid, v, psi


def time_backend(backend, grid, v, psi, steps, repeat, dt=0.01):
    prop = CrankNicolson(grid, v, dt, 1.0, absorbing_mask(grid, dt), backend)
    warm = psi.copy()
    prop.advance(warm, 2)  # JIT compile / cache load
    best = np.inf
    for _ in range(repeat):
        work = psi.copy()
        t0 = time.perf_counter()
        prop.advance(work, steps)
        best = min(best, time.perf_counter() - t0)
    return best / steps, work


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=32768)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    grid, v, psi = setup(args.n)
    results = {}
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    for b in backends:
        per_step, out = time_backend(b, grid, v, psi, args.steps, args.repeat)
        results[b] = (per_step, out)
        print(f"{b:6s}: {per_step * 1e3:8.3f} ms/step  (n={args.n}, {args.steps} steps)")
    if len(results) == 2:
        diff = np.max(np.abs(results["numba"][1] - results["numpy"][1]))
        print(f"speed-up numba/numpy: {results['numpy'][0] / results['numba'][0]:.2f}x, "
              f"max |difference| {diff:.2e}")
    else:
        print("numba unavailable or disabled (QPHASE_DISABLE_NUMBA); numpy only")


if __name__ == "__main__":
    main()
