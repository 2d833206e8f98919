"""Certified substochastic matrices and their fundamental-matrix properties.

A substochastic matrix here is square, entrywise nonnegative, with every row
sum at most 1 and spectral radius strictly below 1.  The spectral-radius
hypothesis is decided exactly: either every row sum is strictly below 1, or
I - P passes the nonsingular-M-matrix test (all leading principal minors of
I - P positive, computed over exact rationals).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvariantViolation,
    MatrixTooSmall,
    NegativeEntry,
    NotColumnSubstochastic,
    PreconditionViolated,
    RowSumExceedsOne,
    SpectralRadiusNotLessThanOne,
)
from .matrix import DenseMatrix, determinant, inverse, minor
from .scalars import FLOAT


class Certification(enum.Enum):
    ROW_SUM_STRICT = "RowSumStrict"
    M_MATRIX = "MMatrixCertified"


@dataclass(frozen=True)
class SubstochasticMatrix:
    """A validated substochastic matrix plus how its spectral radius < 1
    was certified.  Construct via validate_substochastic."""

    P: DenseMatrix
    certification: Certification

    @property
    def n(self) -> int:
        return self.P.n_rows


@dataclass(frozen=True)
class MaximalityWitness:
    row: int
    col: int
    diagonal_value: object
    offending_value: object


@dataclass(frozen=True)
class MaximalityReport:
    """Outcome of the diagonal-maximality check on (I - P^T)^-1."""

    holds: bool
    witness: Optional[MaximalityWitness]
    fundamental: DenseMatrix


def identity_minus(P: DenseMatrix, transposed: bool = False) -> DenseMatrix:
    """I - P, or I - P^T when transposed."""
    n = P.require_square()
    M = P.transpose() if transposed else P
    return DenseMatrix.identity(n, P.backend).sub(M)


def _is_float(M: DenseMatrix) -> bool:
    return M.backend.name == "float"


def spectral_radius_lt_one(P: DenseMatrix) -> bool:
    """Exact decision of rho(P) < 1 for nonnegative P with row sums <= 1.

    Equivalent to I - P being a nonsingular M-matrix, i.e. all leading
    principal minors of I - P positive.  Works over exact rationals even for
    float input (floats convert exactly), so the answer carries no rounding.
    """
    n = P.require_square()
    for i in range(1, n + 1):
        total = P.backend.zero
        for j in range(1, n + 1):
            e = P.at(i, j)
            if e < 0:
                raise PreconditionViolated(f"entry ({i},{j}) is negative")
            total = total + e
        if total > P.backend.one:
            raise PreconditionViolated(f"row {i} sums above 1")
    a = identity_minus(P.to_exact()).rows_as_lists()
    # Unpivoted elimination: the k-th pivot equals (k-th leading minor) /
    # ((k-1)-th leading minor), so all pivots > 0 iff all leading minors > 0.
    for k in range(n):
        pivot = a[k][k]
        if pivot <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / pivot
            if f != 0:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return True


def validate_substochastic(M: DenseMatrix) -> SubstochasticMatrix:
    """Certify M as substochastic with spectral radius < 1, or raise.

    Fast path: every row sum strictly below 1.  Otherwise the exact
    M-matrix test on I - M decides.
    """
    n = M.require_square()
    all_strict = True
    for i in range(1, n + 1):
        total = M.backend.zero
        for j in range(1, n + 1):
            e = M.at(i, j)
            if e < 0:
                raise NegativeEntry(i, j, e)
            total = total + e
        if total > M.backend.one:
            raise RowSumExceedsOne(i, total)
        if not total < M.backend.one:
            all_strict = False
    if all_strict:
        return SubstochasticMatrix(M, Certification.ROW_SUM_STRICT)
    if spectral_radius_lt_one(M):
        return SubstochasticMatrix(M, Certification.M_MATRIX)
    raise SpectralRadiusNotLessThanOne(
        "matrix has spectral radius >= 1 (a leading principal minor of I-P is <= 0)"
    )


def spectral_radius_estimate(P: DenseMatrix, iterations: int = 200, seed: int = 0) -> float:
    """Power-iteration estimate of rho(P) from a seeded positive start vector.

    Float diagnostic only; deterministic for a fixed seed and iteration
    count.  The exact predicate is spectral_radius_lt_one.
    """
    n = P.require_square()
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    from .generators import SplitMix64

    rng = SplitMix64(seed)
    a = np.array(P.to_float().rows_as_lists(), dtype=np.float64)
    v = np.array([0.5 + rng.next_unit() / 2.0 for _ in range(n)], dtype=np.float64)
    estimate = 0.0
    for _ in range(iterations):
        w = a @ v
        norm = float(np.max(np.abs(w)))
        if norm == 0.0:
            return 0.0
        estimate = norm / float(np.max(np.abs(v)))
        v = w / norm
    return estimate


def det_I_minus_Pt_positive(P: SubstochasticMatrix):
    """det(I - P^T); certified input makes this provably positive."""
    d = determinant(identity_minus(P.P, transposed=True))
    if _is_float(P.P):
        ok = d > 0.0
    else:
        ok = d > 0
    if not ok:
        raise InvariantViolation(f"det(I - P^T) = {d!r} is not positive")
    return d


def fundamental_matrix(P: SubstochasticMatrix, transposed: bool = False) -> DenseMatrix:
    """(I - P)^-1, or (I - P^T)^-1 when transposed; entries are checked
    nonnegative (exactly on the exact backend, up to the float floor on
    floats)."""
    C = inverse(identity_minus(P.P, transposed=transposed))
    floor = -FLOAT.abs_floor if _is_float(P.P) else 0
    for e in C.entries:
        if e < floor:
            raise InvariantViolation(f"fundamental matrix entry {e!r} is negative")
    return C


def check_diagonal_maximality(P: SubstochasticMatrix) -> MaximalityReport:
    """Check that every diagonal entry of C = (I - P^T)^-1 is a maximal
    element of its row (non-strict).  First violation in row-major scan
    order is returned as a witness."""
    C = fundamental_matrix(P, transposed=True)
    n = C.n_rows
    for m in range(1, n + 1):
        diag = C.at(m, m)
        for l in range(1, n + 1):
            val = C.at(m, l)
            if val > diag:
                return MaximalityReport(
                    False, MaximalityWitness(m, l, diag, val), C
                )
    return MaximalityReport(True, None, C)


def _check_column_substochastic(Q: DenseMatrix, err=NotColumnSubstochastic):
    n = Q.require_square()
    for j in range(1, n + 1):
        total = Q.backend.zero
        for i in range(1, n + 1):
            e = Q.at(i, j)
            if e < 0:
                raise err(f"entry ({i},{j}) is negative")
            total = total + e
        if total > Q.backend.one:
            raise err(f"column {j} sums above 1")


def merge_rows_reduction(Q: DenseMatrix, m: int) -> DenseMatrix:
    """Add rows m and m+1 of a column-substochastic Q, delete column m.

    This is the (n-1)x(n-1) reduction used to show that the fundamental
    matrix's diagonal dominates: the reduced matrix stays column
    substochastic, so det(I~ - P~) >= 0.
    """
    n = Q.require_square()
    if n < 2:
        raise MatrixTooSmall("need n >= 2")
    _check_column_substochastic(Q)
    if not 1 <= m <= n - 1:
        raise IndexOutOfRange(f"merge index {m} outside 1..{n - 1}")
    rows = Q.rows_as_lists()
    merged = [a + b for a, b in zip(rows[m - 1], rows[m])]
    new_rows = rows[: m - 1] + [merged] + rows[m + 1 :]
    reduced = [v for r in new_rows for j, v in enumerate(r) if j != m - 1]
    out = DenseMatrix(n - 1, n - 1, reduced, Q.backend)
    _check_column_substochastic(out, err=InvariantViolation)
    return out


def minor_sum_nonneg(P: SubstochasticMatrix, m: int, l: int):
    """M_mm - (-1)^(m+l) M_lm on I - P^T; nonnegative whenever diagonal
    maximality holds (checked exactly on the exact backend)."""
    n = P.n
    if not (1 <= m <= n and 1 <= l <= n):
        raise IndexOutOfRange(f"indices ({m},{l}) outside 1..{n}")
    A = identity_minus(P.P, transposed=True)
    value = minor(A, m, m)
    signed = minor(A, l, m)
    if (m + l) % 2 == 0:
        value = value - signed
    else:
        value = value + signed
    if not _is_float(P.P) and value < 0:
        raise InvariantViolation(
            f"M_mm - (-1)^(m+l) M_lm = {value!r} < 0 at (m={m}, l={l})"
        )
    return value
