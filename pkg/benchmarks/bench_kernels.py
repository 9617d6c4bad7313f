#!/usr/bin/env python3
"""Benchmark: compiled kernel extension vs the pure-Python fallback.

Runs the two hot kernels (weight-grid sweep and batch scoring) on both
backends, checks the outputs are bit-identical, and prints a timing
table.  Usage: python benchmarks/bench_kernels.py [--cells N] [--cases N]
"""

import argparse
import time

import numpy as np

from aivalue import _kernels_py

try:
    from aivalue import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench(cells: int, cases: int) -> None:
    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.insert(0, ("compiled", _kernels))
    else:
        print("compiled extension not built; timing the fallback only")

    side = max(2, round(cells ** 0.2))
    axes = [np.linspace(0.0, 2.0, side) for _ in range(5)]
    n_cells = side ** 5
    rng = np.random.default_rng(7)
    dh, eff, cost = rng.uniform(0, 1, (3, cases))
    quality = rng.uniform(0, 5, cases)
    p = rng.uniform(0, 1, cases)
    impact = rng.uniform(0, 10, cases)
    corr = rng.uniform(0, 5, cases)

    print(f"weight_grid: {side}^5 = {n_cells} cells; "
          f"composite_batch: {cases} cases")
    print(f"{'backend':<10} {'weight_grid':>14} {'composite_batch':>17}")
    results = {}
    for name, mod in backends:
        t_grid, grid = _time(lambda m=mod: m.weight_grid(
            0.7, 0.45, 0.3, 2.0, 1.1, *axes))
        t_batch, batch = _time(lambda m=mod: m.composite_batch(
            dh, eff, cost, quality, p, impact, corr, 1.0, 0.5, 0.3, 0.2, 1.0))
        results[name] = (t_grid, t_batch, grid, batch)
        print(f"{name:<10} {t_grid * 1e3:>11.2f} ms {t_batch * 1e3:>14.2f} ms")

    if len(results) == 2:
        c, py = results["compiled"], results["python"]
        identical = (np.array_equal(c[2], py[2])
                     and np.array_equal(c[3], py[3]))
        print(f"speedup: weight_grid x{py[0] / c[0]:.1f}, "
              f"composite_batch x{py[1] / c[1]:.1f}")
        print(f"outputs bit-identical: {identical}")
        if not identical:
            raise SystemExit("backend outputs diverged")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--cells", type=int, default=1_000_000)
    ap.add_argument("--cases", type=int, default=1_000_000)
    args = ap.parse_args()
    bench(args.cells, args.cases)
