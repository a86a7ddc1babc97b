#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each integration kernel on a representative workload with both
backends, reports wall time, speedup, and the worst disagreement.

Usage: python benchmarks/bench_kernels.py [--steps N]
"""

import argparse
import time

import numpy as np

from coilcore._kernels import _pyref

try:
    from coilcore._kernels import _fast
except ImportError:
    _fast = None


def timed(fn, *args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def worst_disagreement(a, b):
    worst = 0.0
    for x, y in zip(a, b):
        if isinstance(x, np.ndarray):
            scale = max(np.max(np.abs(x)), 1.0)
            worst = max(worst, float(np.max(np.abs(x - y))) / scale)
    return worst


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=200_000)
    args = ap.parse_args()
    n = args.steps

    sine = (1, np.array([0.0, 1.0, 100.0]), np.empty(0), np.empty(0))
    pulse = (2, np.array([0.0, 1.0, 0.01, 0.001, 0.01, 3.0]),
             np.empty(0), np.empty(0))
    upd = np.array([n // 7, 2 * n // 7, 3 * n // 7], dtype=np.int64)

    workloads = [
        ("mag_rk4", "mag_rk4",
         (*sine, 5e6, -0.964, 1e-8, n)),
        ("rlc_rk4 (staircase)", "rlc_rk4",
         (*pulse, 10.0, 2.474e-6, 2.0, 0.8, upd, 0.0, 0.0, 0.0, 0.07 / n, n)),
        ("coilcore_rk4", "coilcore_rk4",
         (*sine, 50.0, 1e-5, 1e-3, 5e6, -2.0, 0.0, 0.0, 0.02 / n, n, 1e-9)),
    ]

    print(f"steps per workload: {n}")
    if _fast is None:
        print("compiled kernels unavailable; timing the fallback only")
    header = f"{'kernel':24} {'python':>10} {'fast':>10} {'speedup':>9} {'max rel diff':>13}"
    print(header)
    print("-" * len(header))
    for label, name, callargs in workloads:
        t_py, out_py = timed(getattr(_pyref, name), *callargs)
        if _fast is None:
            print(f"{label:24} {t_py:9.3f}s {'-':>10} {'-':>9} {'-':>13}")
            continue
        t_c, out_c = timed(getattr(_fast, name), *callargs)
        diff = worst_disagreement(out_py, out_c)
        print(f"{label:24} {t_py:9.3f}s {t_c:9.3f}s {t_py / t_c:8.1f}x {diff:13.2e}")


if __name__ == "__main__":
    main()
