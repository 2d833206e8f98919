"""Monte-Carlo random-walk oracle for the fundamental matrix.

A walk at state i moves to j with probability p_ij and absorbs with the
leftover probability 1 - sum_j p_ij; the expected number of visits to j
from start i (counting the visit at time 0) is entry (i, j) of (I-P)^-1.
Simulating walks therefore cross-checks the exact linear algebra through a
channel that never touches it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange
from .generators import derive_seed
from .kernels import walk_visits
from .substochastic import SubstochasticMatrix, fundamental_matrix

WALK_CAP_DEFAULT = 10**6
CONFIDENCE_Z = 1.96  # 95% normal approximation


@dataclass(frozen=True)
class WalkStatistics:
    """Per-state mean visit counts with 95% half-widths for one start state."""

    start_state: int
    trials: int
    mean_visits: tuple[float, ...]
    ci_halfwidth: tuple[float, ...]
    seed: int
    cap_exceeded: int


def simulate_visits(
    P: SubstochasticMatrix,
    start: int,
    trials: int,
    seed: int,
    cap: int = WALK_CAP_DEFAULT,
) -> WalkStatistics:
    """Simulate `trials` independent walks from `start` (1-based).

    Deterministic for a fixed seed: trial t draws from the SplitMix64
    stream seeded with mix64(seed + (t+1)*GOLDEN), so results do not depend
    on execution order or kernel backend.  Walks are capped at `cap` moves;
    capped walks are counted in cap_exceeded instead of raising.
    """
    n = P.n
    if not 1 <= start <= n:
        raise IndexOutOfRange(f"start state {start} outside 1..{n}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    p = np.array(P.P.to_float().rows_as_lists(), dtype=np.float64)
    cum = np.cumsum(p, axis=1)
    visits, cap_exceeded = walk_visits(cum, start - 1, trials, seed, cap)
    sums = visits.sum(axis=0).astype(np.float64)
    mean = sums / trials
    sumsq = (visits.astype(np.float64) ** 2).sum(axis=0)
    var = np.maximum(sumsq - sums * sums / trials, 0.0) / max(trials - 1, 1)
    halfwidth = CONFIDENCE_Z * np.sqrt(var / trials)
    return WalkStatistics(
        start, trials, tuple(mean.tolist()), tuple(halfwidth.tolist()), seed,
        int(cap_exceeded),
    )


@dataclass(frozen=True)
class CrosscheckCell:
    start: int
    state: int
    estimate: float
    halfwidth: float
    exact: float
    flagged: bool


@dataclass(frozen=True)
class CrosscheckReport:
    """Estimate-vs-exact comparison of (I-P)^-1 over all start states."""

    trials: int
    seed: int
    sigma: float
    stats: tuple[WalkStatistics, ...]
    cells: tuple[CrosscheckCell, ...]
    cap_exceeded: int

    @property
    def flags(self) -> tuple[CrosscheckCell, ...]:
        return tuple(c for c in self.cells if c.flagged)

    @property
    def passed(self) -> bool:
        return not any(c.flagged for c in self.cells)


def crosscheck_fundamental(
    P: SubstochasticMatrix,
    trials: int,
    seed: int,
    sigma: float = 4.0,
    cap: int = WALK_CAP_DEFAULT,
) -> CrosscheckReport:
    """Simulate from every start state and flag any (start, state) whose
    estimate deviates from the exact (I-P)^-1 entry by more than
    sigma * half-width.  Start state s uses the sub-seed derive_seed(seed, s-1).
    """
    n = P.n
    exact = fundamental_matrix(P, transposed=False)
    stats = []
    cells = []
    cap_total = 0
    for s in range(1, n + 1):
        st = simulate_visits(P, s, trials, derive_seed(seed, s - 1), cap)
        stats.append(st)
        cap_total += st.cap_exceeded
        for j in range(1, n + 1):
            target = float(exact.at(s, j))
            est = st.mean_visits[j - 1]
            hw = st.ci_halfwidth[j - 1]
            flagged = abs(est - target) > sigma * hw
            cells.append(CrosscheckCell(s, j, est, hw, target, flagged))
    return CrosscheckReport(
        trials, seed, sigma, tuple(stats), tuple(cells), cap_total
    )
