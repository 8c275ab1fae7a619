#!/usr/bin/env python3
"""Benchmark the compiled integration kernels against the pure-Python fallback.

Runs each kernel on a representative workload with both backends and prints
a timing table. Usage: python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import time

import numpy as np

from qsearch import _fallback
from qsearch._backend import COMPILED

if COMPILED:
    from qsearch import _core
else:
    _core = None


def timed(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def full_star_args(n=256, steps=20000):
    c0 = np.zeros(n, dtype=np.complex128)
    c0[1] = 1.0
    energies = np.full(n, 1.0)
    energies[0] = 0.0
    mask = (np.arange(1, n + 1) % 2 == 1).astype(np.uint8)
    mask[1] = 0
    return (c0, energies, 1, 1.0 / 48.0, 1.0, mask, 0.0, 79.5 / steps, steps, steps)


def custom_star_args(n=64, steps=20000):
    c0 = np.zeros(n, dtype=np.complex128)
    c0[1] = 1.0
    energies = np.full(n, 1.0)
    energies[0] = 0.0
    amps = np.full(n, 0.01)
    amps[1] = 0.0
    freqs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return (c0, energies, 1, amps, freqs, 0.0, 80.0 / steps, steps, steps)


def reduced_trial_args(steps=200000):
    return (0j, 1.0 + 0j, 0j, 998.0, 0.01, 10.0, 0.0, 320.0 / steps, steps, steps)


def reduced_opt_args(steps=200000):
    return (0j, 1.0 + 0j, 0j, 0j, 499.0, 0.01, 10.0, 0.0, 320.0 / steps, steps, steps)


CASES = (
    ("full_star_rk4 (N=256, 20k steps)", "full_star_rk4", full_star_args),
    ("custom_star_rk4 (N=64, 20k steps)", "custom_star_rk4", custom_star_args),
    ("reduced_trial_rk4 (200k steps)", "reduced_trial_rk4", reduced_trial_args),
    ("reduced_opt_rk4 (200k steps)", "reduced_opt_rk4", reduced_opt_args),
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not COMPILED:
        print("compiled core not available; only the fallback will run")

    width = max(len(label) for label, _, _ in CASES)
    header = f"{'kernel':<{width}}  {'fallback':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, name, make_args in CASES:
        kernel_args = make_args()
        t_fb, r_fb = timed(getattr(_fallback, name), *kernel_args, repeat=args.repeat)
        if _core is not None:
            t_c, r_c = timed(getattr(_core, name), *kernel_args, repeat=args.repeat)
            gap = np.max(np.abs(r_fb[1][-1] - r_c[1][-1]))
            assert gap < 1e-10, f"backend mismatch {gap:.2e} on {name}"
            print(f"{label:<{width}}  {t_fb * 1e3:>8.1f}ms  {t_c * 1e3:>8.1f}ms  {t_fb / t_c:>7.1f}x")
        else:
            print(f"{label:<{width}}  {t_fb * 1e3:>8.1f}ms  {'-':>10}  {'-':>8}")


if __name__ == "__main__":
    main()
