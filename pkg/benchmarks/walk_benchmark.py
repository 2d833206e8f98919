#!/usr/bin/env python3
"""Benchmark the numba walk kernel against the pure-numpy fallback.

Both kernels are fed the same cumulative transition rows and per-trial
SplitMix64 streams, so their outputs must match exactly; the script verifies
that before timing.  Usage:

    python benchmarks/walk_benchmark.py [--n 8] [--trials 200000] [--seed 1]

Run with SUBSTOCH_PURE_NUMPY=1 to confirm the dispatcher falls back.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from substoch.generators import GenSpec, gen_substochastic
from substoch.kernels import (
    HAS_NUMBA,
    USING_NUMBA,
    walk_visits_numba,
    walk_visits_numpy,
)


def time_kernel(fn, cum, trials, seed, cap, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(cum, 0, trials, seed, cap)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=8)
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--max-row-sum", default="9/10")
    parser.add_argument("--cap", type=int, default=10**6)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    spec = GenSpec(n=args.n, seed=args.seed, max_row_sum=args.max_row_sum)
    P = gen_substochastic(spec).P
    cum = np.cumsum(np.array(P.to_float().rows_as_lists()), axis=1)
    print(
        f"matrix: {args.n}x{args.n} (seed {args.seed}), trials={args.trials}, "
        f"dispatcher={'numba' if USING_NUMBA else 'numpy'}"
    )

    t_np, (v_np, s_np) = time_kernel(
        walk_visits_numpy, cum, args.trials, args.seed, args.cap, args.repeats
    )
    steps = int(v_np.sum())
    print(f"numpy fallback : {t_np * 1e3:9.2f} ms  ({steps / t_np / 1e6:7.1f} M visits/s)")

    if not HAS_NUMBA:
        print("numba kernel   : unavailable (not installed or SUBSTOCH_PURE_NUMPY set)")
        return 0

    walk_visits_numba(cum, 0, 10, args.seed, args.cap)  # compile outside timing
    t_nb, (v_nb, s_nb) = time_kernel(
        walk_visits_numba, cum, args.trials, args.seed, args.cap, args.repeats
    )
    if not (np.array_equal(v_np, v_nb) and s_np == s_nb):
        print("ERROR: kernel outputs differ")
        return 1
    print(f"numba kernel   : {t_nb * 1e3:9.2f} ms  ({steps / t_nb / 1e6:7.1f} M visits/s)")
    print(f"outputs identical; speedup: {t_np / t_nb:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
