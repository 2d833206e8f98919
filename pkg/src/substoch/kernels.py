"""Random-walk visit-count kernels.

The hot loop of the Monte-Carlo oracle lives here twice: a numba-jitted
scalar kernel and a pure-numpy vectorized fallback.  Both consume identical
per-trial SplitMix64 streams (trial t is seeded with
mix64(seed + (t+1)*GOLDEN), then advances by GOLDEN per step) and compare
the same uniforms against the same precomputed cumulative transition rows,
so their visit matrices are bit-identical.

Dispatch: numba when importable, unless SUBSTOCH_PURE_NUMPY=1 (checked at
import time).  ``benchmarks/walk_benchmark.py`` times one against the other.
"""

from __future__ import annotations

import os

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_U64 = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_SH30 = np.uint64(30)
_SH27 = np.uint64(27)
_SH31 = np.uint64(31)
_SH11 = np.uint64(11)
_INV53 = 2.0**-53


def _pure_numpy_forced() -> bool:
    return os.environ.get("SUBSTOCH_PURE_NUMPY", "").strip().lower() in {
        "1",
        "true",
        "yes",
        "on",
    }


PURE_NUMPY = _pure_numpy_forced()
HAS_NUMBA = False
if not PURE_NUMPY:
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAS_NUMBA = False

USING_NUMBA = HAS_NUMBA and not PURE_NUMPY


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _SH30)) * _MIX1
    z = (z ^ (z >> _SH27)) * _MIX2
    return z ^ (z >> _SH31)


def walk_visits_numpy(cum, start: int, trials: int, seed: int, cap: int):
    """Vectorized fallback: steps every live walk once per iteration.

    cum: (n, n) float64 cumulative transition rows. Returns the
    (trials, n) int64 visit matrix and the number of walks still alive
    after `cap` moves.
    """
    cum = np.ascontiguousarray(cum, dtype=np.float64)
    n = cum.shape[0]
    visits = np.zeros((trials, n), dtype=np.int64)
    visits[:, start] = 1
    idx = np.arange(trials, dtype=np.uint64)
    rng = _mix64_array(np.uint64(seed & MASK64) + (idx + np.uint64(1)) * GOLDEN_U64)
    state = np.full(trials, start, dtype=np.int64)
    alive = np.arange(trials)
    steps = 0
    while alive.size and steps < cap:
        rng[alive] += GOLDEN_U64
        z = _mix64_array(rng[alive])
        u = (z >> _SH11).astype(np.float64) * _INV53
        rows = cum[state[alive]]
        nxt = (rows <= u[:, None]).sum(axis=1)
        moved_mask = nxt < n
        moved = alive[moved_mask]
        new_states = nxt[moved_mask]
        state[moved] = new_states
        visits[moved, new_states] += 1
        alive = moved
        steps += 1
    return visits, int(alive.size)


def _walk_scalar(cum, start, trials, seed, cap):
    # numba source; keep every RNG operand uint64 to avoid promotion.
    n = cum.shape[0]
    visits = np.zeros((trials, n), dtype=np.int64)
    survivors = 0
    for t in range(trials):
        z = seed + (np.uint64(t) + np.uint64(1)) * GOLDEN_U64
        z = (z ^ (z >> _SH30)) * _MIX1
        z = (z ^ (z >> _SH27)) * _MIX2
        rng = z ^ (z >> _SH31)
        pos = start
        visits[t, pos] += 1
        steps = 0
        absorbed = False
        while steps < cap:
            rng = rng + GOLDEN_U64
            z = rng
            z = (z ^ (z >> _SH30)) * _MIX1
            z = (z ^ (z >> _SH27)) * _MIX2
            z = z ^ (z >> _SH31)
            u = np.float64(z >> _SH11) * _INV53
            row = cum[pos]
            nxt = n
            for j in range(n):
                if u < row[j]:
                    nxt = j
                    break
            if nxt == n:
                absorbed = True
                break
            pos = nxt
            visits[t, pos] += 1
            steps += 1
        if not absorbed:
            survivors += 1
    return visits, survivors


if HAS_NUMBA:
    _walk_scalar_jit = njit(cache=True)(_walk_scalar)


def walk_visits_numba(cum, start: int, trials: int, seed: int, cap: int):
    """numba-jitted scalar kernel (compiles on first call)."""
    if not HAS_NUMBA:
        raise RuntimeError("numba path unavailable (missing or disabled)")
    visits, survivors = _walk_scalar_jit(
        np.ascontiguousarray(cum, dtype=np.float64),
        np.int64(start),
        np.int64(trials),
        np.uint64(seed & MASK64),
        np.int64(cap),
    )
    return visits, int(survivors)


def walk_visits(cum, start: int, trials: int, seed: int, cap: int):
    """Backend-dispatching entry point used by the Monte-Carlo module."""
    if USING_NUMBA:
        return walk_visits_numba(cum, start, trials, seed, cap)
    return walk_visits_numpy(cum, start, trials, seed, cap)
