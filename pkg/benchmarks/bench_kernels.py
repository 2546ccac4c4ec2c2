#!/usr/bin/env python3
"""Time the numba kernels against their numpy twins on desk-scale inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is called once before timing so numba compilation (or the
on-disk cache load) stays out of the numbers. Reported times are the best
of ``--repeat`` runs, in milliseconds.
"""

import argparse
import time

import numpy as np

from kliepkit.kernels import numba_impl, numpy_impl
from kliepkit.geometry import sphere_grid


def best_of(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return 1000 * min(times)


def cases(rng):
    X = rng.standard_normal((700, 36))            # m = 36 -> k = 666 statistics
    U = rng.standard_normal((200, 666))           # n_y = 200 centered statistics
    d = 0.05 * rng.standard_normal(666)
    far = rng.standard_normal((60, 12)) + 0.8      # tbar_x outside: a real min-norm solve
    D3 = sphere_grid(3, 20000, "L2")
    U3 = rng.standard_normal((12, 3))
    return [
        ("pairwise_stats  700x36", "pairwise_stats", (X,)),
        ("loss_and_grad   200x666", "loss_and_grad", (U, d)),
        ("min_norm_point  60x12", "min_norm_point", (far, 6000, 1e-9)),
        ("away_frank_wolfe 60x12", "away_frank_wolfe", (far, 6000, 1e-9)),
        ("sphere_grid     20000x3", "sphere_grid_minmax", (D3, U3)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()
    if numba_impl is None:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<26}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for label, name, inputs in cases(rng):
        t_np = best_of(getattr(numpy_impl, name), inputs, args.repeat)
        t_nb = best_of(getattr(numba_impl, name), inputs, args.repeat)
        print(f"{label:<26}{t_np:>10.3f}{t_nb:>10.3f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
