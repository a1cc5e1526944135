"""Compare the compiled kernels against the NumPy fallback.

Times the mesh-style weak-fraction objective sweep and the outage
counting kernels on identical inputs, then prints one table row per
kernel with the speedup of the compiled path.

Usage: python benchmarks/bench_backends.py [--repeat 5] [--trials 200000]
"""
import argparse
import math
import time

import numpy as np

from wideband_outage import _pykernels

try:
    from wideband_outage import _kernels
except ImportError:
    _kernels = None


def best_of(repeat, fn, *args):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def mesh_workload(mod, g0_grid, tau_grid, xs):
    for g0 in g0_grid:
        for tau in tau_grid:
            mod.feedback_e0(g0, tau, 1.0)
            mod.feedback_ex_batch(g0, tau, 1.0, xs)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5, help="best-of timing repeats")
    ap.add_argument("--trials", type=int, default=200000, help="count-kernel rows")
    args = ap.parse_args()

    if _kernels is None:
        print("compiled extension not built; nothing to compare")
        return

    g0_grid = np.arange(0.05, 0.91, 0.05)
    tau_grid = np.arange(0.2, 4.01, 0.1)
    xs = np.linspace(0.005, 0.995, 199)

    rng = np.random.default_rng(0)
    gains = rng.standard_exponential((args.trials, 20))
    u = rng.random((args.trials, 20))
    k0 = rng.binomial(20, 1.0 - math.exp(-1.0), size=args.trials).astype(np.int64)
    p0 = 1.0 - math.exp(-1.0)

    cases = [
        (
            "mesh objectives",
            lambda mod: mesh_workload(mod, g0_grid, tau_grid, xs),
        ),
        (
            "count linear",
            lambda mod: mod.count_outages_linear(gains, 0.05, 0.5),
        ),
        (
            "count exact",
            lambda mod: mod.count_outages_exact(gains, 0.05, 0.5),
        ),
        (
            "count feedback",
            lambda mod: mod.count_outages_feedback(u, k0, p0, 1.0, 0.5, 0.5, 0.8),
        ),
    ]

    print(f"{'kernel':<18}{'pure (s)':>12}{'compiled (s)':>14}{'speedup':>10}")
    for name, fn in cases:
        pure = best_of(args.repeat, fn, _pykernels)
        fast = best_of(args.repeat, fn, _kernels)
        print(f"{name:<18}{pure:>12.4f}{fast:>14.4f}{pure / fast:>9.1f}x")


if __name__ == "__main__":
    main()
