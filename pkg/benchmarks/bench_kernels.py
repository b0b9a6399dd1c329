#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy/python fallback.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import math
import time

import numpy as np

from orbitsieve._kernels import _pykern

try:
    from orbitsieve._kernels import _ckern
except ImportError:
    _ckern = None

PHI = (1 + math.sqrt(5)) / 2


def timed(fn, *args, repeat=3):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller sizes")
    args = ap.parse_args()

    n_sieve = 10**6 if args.quick else 10**7
    n_sum = 10**6
    n_sl2 = 10**5 if args.quick else 5 * 10**5
    n_heis = 10**6

    rng = np.random.default_rng(0)
    vals = rng.normal(size=n_sum) + 1j * rng.normal(size=n_sum)
    weights = rng.integers(-1, 2, size=n_sum).astype(np.int8)
    cps = [n_sum]

    cases = [
        (f"sieve_mu_lambda({n_sieve:.0e})", "sieve_mu_lambda", (n_sieve,)),
        (f"weighted_partial_sums({n_sum:.0e})", "weighted_partial_sums", (weights, vals, cps)),
        (f"sl2_orbit_heights({n_sl2:.0e})", "sl2_orbit_heights", (1.0, 0.0, PHI, 1.0, 1.0, n_sl2)),
        (f"heis_orbit_coords({n_heis:.0e})", "heis_orbit_coords",
         (0.1, 0.2, 0.3, math.sqrt(2) % 1, math.sqrt(3) % 1, 0.05, n_heis)),
    ]

    print(f"{'kernel':38s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for label, name, fargs in cases:
        t_py, _ = timed(getattr(_pykern, name), *fargs)
        if _ckern is not None:
            t_cy, _ = timed(getattr(_ckern, name), *fargs)
            print(f"{label:38s} {t_py:9.3f}s {t_cy:9.3f}s {t_py / t_cy:7.1f}x")
        else:
            print(f"{label:38s} {t_py:9.3f}s {'n/a':>10s} {'':>8s}")
    if _ckern is None:
        print("\ncompiled kernel not built; showing fallback timings only")


if __name__ == "__main__":
    main()
