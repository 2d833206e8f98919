"""Both-sides evaluation of the minor/adjugate/Schur-quotient identities.

Every identity is evaluated by two independent code paths (the left side is
never derived from the right side): quotient forms go through Gauss-Jordan
inverses, cleared forms through cofactor adjugates and elimination
determinants.  On the exact backend a report passes iff its residual is
literally zero; on the float backend iff |residual| <= tol*(1+max(|lhs|,|rhs|)).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import (
    IndexOutOfRange,
    InvariantViolation,
    MatrixTooSmall,
    SingularMatrix,
    SingularSubmatrix,
    SubstochError,
)
from .matrix import (
    DenseMatrix,
    col_without,
    delete_row_col,
    determinant,
    adjugate,
    inverse,
    mat_vec,
    row_without,
    selector,
)
from .substochastic import SubstochasticMatrix, identity_minus


class IdentityId(enum.IntEnum):
    LEMMA1 = 1
    LEMMA2 = 2
    EQ13 = 3
    EQ17 = 4
    EQ20 = 5
    EQ21 = 6
    THM2_FIRST = 7
    THM2_SECOND = 8

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    IdentityId.LEMMA1: "Lemma1",
    IdentityId.LEMMA2: "Lemma2",
    IdentityId.EQ13: "Eq13",
    IdentityId.EQ17: "Eq17",
    IdentityId.EQ20: "Eq20",
    IdentityId.EQ21: "Eq21",
    IdentityId.THM2_FIRST: "Thm2First",
    IdentityId.THM2_SECOND: "Thm2Second",
}


@dataclass(frozen=True)
class IdentityReport:
    """One identity instance: both sides, their difference, pass/fail."""

    identity: IdentityId
    m: Optional[int]
    l: Optional[int]
    lhs: object
    rhs: object
    residual: object
    passed: bool
    backend: str
    error: Optional[str] = None

    def sort_key(self):
        return (int(self.identity), self.m or 0, self.l or 0)


def _report(identity, m, l, lhs, rhs, backend, tol) -> IdentityReport:
    residual = lhs - rhs
    return IdentityReport(
        identity, m, l, lhs, rhs, residual,
        backend.residual_ok(lhs, rhs, residual, tol), backend.name,
    )


def _error_report(identity, m, l, backend, exc) -> IdentityReport:
    return IdentityReport(
        identity, m, l, None, None, None, False, backend.name,
        error=f"{type(exc).__name__}: {exc}",
    )


class GeneralMatrix:
    """A square matrix certified to have the nonzero minors that the
    quotient identities divide by: det(B) and every det(B(l|l)), or every
    principal minor when certified with all_principal.

    Caches the per-index deletions, determinants, adjugates and inverses
    that the identity sweeps reuse; construct via certify_general.
    """

    def __init__(self, B: DenseMatrix, scope: str, det):
        self.B = B
        self.scope = scope
        self.det = det
        self._sub: dict[int, DenseMatrix] = {}
        self._det_sub: dict[int, object] = {}
        self._adj_sub: dict[int, DenseMatrix] = {}
        self._inv_sub: dict[int, DenseMatrix] = {}

    @property
    def n(self) -> int:
        return self.B.n_rows

    @property
    def backend(self):
        return self.B.backend

    def sub(self, l: int) -> DenseMatrix:
        if l not in self._sub:
            self._sub[l] = delete_row_col(self.B, l, l)
        return self._sub[l]

    def det_sub(self, l: int):
        if l not in self._det_sub:
            self._det_sub[l] = determinant(self.sub(l))
        return self._det_sub[l]

    def adj_sub(self, l: int) -> DenseMatrix:
        if l not in self._adj_sub:
            self._adj_sub[l] = adjugate(self.sub(l))
        return self._adj_sub[l]

    def inv_sub(self, l: int) -> DenseMatrix:
        if l not in self._inv_sub:
            try:
                self._inv_sub[l] = inverse(self.sub(l))
            except SingularMatrix as exc:
                raise SingularSubmatrix(f"B({l}|{l}) is singular: {exc}") from exc
        return self._inv_sub[l]


def _principal_minor(B: DenseMatrix, keep: tuple[int, ...]):
    rows = [[B.at(i, j) for j in keep] for i in keep]
    return determinant(DenseMatrix.from_rows(rows, B.backend))


def certify_general(B: DenseMatrix, all_principal: bool = False) -> GeneralMatrix:
    """Check the nonzero-minor hypotheses and wrap B.

    Default scope checks exactly the denominators the identities need:
    det(B) and det(B(l|l)) for every l.  all_principal additionally checks
    every principal minor det(B[S,S]) over nonempty index sets S (2^n - 1
    determinants; guarded to n <= 12).
    """
    n = B.require_square()
    det = determinant(B)
    if det == 0:
        raise SingularSubmatrix("det(B) is zero")
    G = GeneralMatrix(B, "all_principal" if all_principal else "denominators", det)
    for l in range(1, n + 1) if n >= 2 else ():
        d = determinant(delete_row_col(B, l, l))
        if d == 0:
            raise SingularSubmatrix(f"det(B({l}|{l})) is zero")
        G._det_sub[l] = d
    if all_principal:
        if n > 12:
            raise ValueError("all_principal certification limited to n <= 12")
        for size in range(1, n + 1):
            for keep in itertools.combinations(range(1, n + 1), size):
                if _principal_minor(B, keep) == 0:
                    raise SingularSubmatrix(
                        f"principal minor on index set {keep} is zero"
                    )
    return G


def _bilinear(row_vec, M: DenseMatrix, col_vec):
    return row_vec.dot(mat_vec(M, col_vec))


def schur_denominator(B: GeneralMatrix, l: int):
    """b_ll - b_{l.} (B(l|l))^-1 b_{.l}; equals det(B)/det(B(l|l))."""
    M = B.B
    n = M.require_square()
    if n < 2:
        raise MatrixTooSmall("need n >= 2")
    if not 1 <= l <= n:
        raise IndexOutOfRange(f"index {l} outside 1..{n}")
    den = M.at(l, l) - _bilinear(row_without(M, l), B.inv_sub(l), col_without(M, l))
    if B.backend.name == "exact" and den * B.det_sub(l) != B.det:
        raise InvariantViolation(
            f"Schur denominator at l={l} does not satisfy den*det(B(l|l)) == det(B)"
        )
    return den


def lemma1_sides(B: GeneralMatrix, m: int, l: int, tol=None) -> IdentityReport:
    """f_ml adj(B(l|l)) b_{.l}  vs  (-1)^(m+l+1) det(B(l|m))."""
    M = B.B
    n = M.require_square()
    f_ml = selector(m, l, n, B.backend)
    lhs = f_ml.dot(mat_vec(B.adj_sub(l), col_without(M, l)))
    d = determinant(delete_row_col(M, l, m))
    rhs = d if (m + l + 1) % 2 == 0 else -d
    return _report(IdentityId.LEMMA1, m, l, lhs, rhs, B.backend, tol)


def lemma2_sides(B: GeneralMatrix, l: int, tol=None) -> IdentityReport:
    """b_ll det(B(l|l)) - b_{l.} adj(B(l|l)) b_{.l}  vs  det(B)."""
    M = B.B
    n = M.require_square()
    if n < 2:
        raise MatrixTooSmall("need n >= 2")
    if not 1 <= l <= n:
        raise IndexOutOfRange(f"index {l} outside 1..{n}")
    lhs = M.at(l, l) * B.det_sub(l) - _bilinear(
        row_without(M, l), B.adj_sub(l), col_without(M, l)
    )
    rhs = determinant(M)
    return _report(IdentityId.LEMMA2, None, l, lhs, rhs, B.backend, tol)


def _schur_quotient_terms(B: GeneralMatrix, k: int):
    """(numerator bilinear form, denominator) of the k-th Schur quotient,
    inverse route."""
    M = B.B
    inv_k = B.inv_sub(k)
    col_k = col_without(M, k)
    x = _bilinear(row_without(M, k), inv_k, col_k)
    den = M.at(k, k) - x
    if den == 0:
        raise SingularSubmatrix(f"Schur denominator vanished at index {k}")
    return inv_k, col_k, x, den


def eq13_sides(B: GeneralMatrix, m: int, tol=None) -> IdentityReport:
    """Diagonal Schur-quotient expansion, inverse route.

    lhs: b_{m.}(B(m|m))^-1 b_{.m} / (b_mm - b_{m.}(B(m|m))^-1 b_{.m})
    rhs: sum over l != m of b_lm f_ml (B(l|l))^-1 b_{.l} / (b_ll - ...).
    """
    M = B.B
    n = M.require_square()
    if n < 2:
        raise MatrixTooSmall("need n >= 2")
    if not 1 <= m <= n:
        raise IndexOutOfRange(f"index {m} outside 1..{n}")
    _, _, x, den = _schur_quotient_terms(B, m)
    lhs = x / den
    rhs = B.backend.zero
    for l in range(1, n + 1):
        if l == m:
            continue
        inv_l, col_l, _, den_l = _schur_quotient_terms(B, l)
        f_ml = selector(m, l, n, B.backend)
        rhs = rhs + M.at(l, m) * f_ml.dot(mat_vec(inv_l, col_l)) / den_l
    return _report(IdentityId.EQ13, m, None, lhs, rhs, B.backend, tol)


def _adjugate_quotient_terms(B: GeneralMatrix, k: int):
    """Adjugate-route analogue of _schur_quotient_terms; on the exact
    backend the cleared denominator must literally equal det(B)."""
    M = B.B
    adj_k = B.adj_sub(k)
    col_k = col_without(M, k)
    num = _bilinear(row_without(M, k), adj_k, col_k)
    den = M.at(k, k) * B.det_sub(k) - num
    if B.backend.name == "exact" and den != B.det:
        raise InvariantViolation(
            f"cleared denominator at index {k} does not equal det(B)"
        )
    if den == 0:
        raise SingularSubmatrix(f"cleared denominator vanished at index {k}")
    return adj_k, col_k, num, den


def eq17_residual(B: GeneralMatrix, m: int, tol=None) -> IdentityReport:
    """Adjugate-cleared form of the diagonal expansion (no inverses)."""
    M = B.B
    n = M.require_square()
    if n < 2:
        raise MatrixTooSmall("need n >= 2")
    if not 1 <= m <= n:
        raise IndexOutOfRange(f"index {m} outside 1..{n}")
    _, _, num, den = _adjugate_quotient_terms(B, m)
    lhs = num / den
    rhs = B.backend.zero
    for l in range(1, n + 1):
        if l == m:
            continue
        adj_l, col_l, _, den_l = _adjugate_quotient_terms(B, l)
        f_ml = selector(m, l, n, B.backend)
        rhs = rhs + M.at(l, m) * f_ml.dot(mat_vec(adj_l, col_l)) / den_l
    return _report(IdentityId.EQ17, m, None, lhs, rhs, B.backend, tol)


def eq20_sides(B: GeneralMatrix, l: int, m: int, tol=None) -> IdentityReport:
    """Off-diagonal Schur-quotient expansion, inverse route.

    lhs: -b_mm f_lm (B(m|m))^-1 b_{.m} / (b_mm - b_{m.}(B(m|m))^-1 b_{.m})
    rhs: -b_lm / (b_ll - ...) + sum over k != l,m of the k-th quotient.
    """
    M = B.B
    n = M.require_square()
    f_lm = selector(l, m, n, B.backend)
    inv_m, col_m, _, den_m = _schur_quotient_terms(B, m)
    lhs = -M.at(m, m) * f_lm.dot(mat_vec(inv_m, col_m)) / den_m
    _, _, _, den_l = _schur_quotient_terms(B, l)
    rhs = -M.at(l, m) / den_l
    for k in range(1, n + 1):
        if k == l or k == m:
            continue
        inv_k, col_k, _, den_k = _schur_quotient_terms(B, k)
        f_lk = selector(l, k, n, B.backend)
        rhs = rhs + M.at(k, m) * f_lk.dot(mat_vec(inv_k, col_k)) / den_k
    return _report(IdentityId.EQ20, m, l, lhs, rhs, B.backend, tol)


def eq21_residual(B: GeneralMatrix, l: int, m: int, tol=None) -> IdentityReport:
    """Adjugate-cleared form of the off-diagonal expansion.

    lhs: -b_mm f_lm adj(B(m|m)) b_{.m}
    rhs: -b_lm det(B(l|l)) + sum over k != l,m of b_km f_lk adj(B(k|k)) b_{.k}.
    """
    M = B.B
    n = M.require_square()
    f_lm = selector(l, m, n, B.backend)
    lhs = -M.at(m, m) * f_lm.dot(mat_vec(B.adj_sub(m), col_without(M, m)))
    rhs = -M.at(l, m) * B.det_sub(l)
    for k in range(1, n + 1):
        if k == l or k == m:
            continue
        f_lk = selector(l, k, n, B.backend)
        rhs = rhs + M.at(k, m) * f_lk.dot(
            mat_vec(B.adj_sub(k), col_without(M, k))
        )
    return _report(IdentityId.EQ21, m, l, lhs, rhs, B.backend, tol)


class _DeletionCache:
    """Per-index inverses of (I-P)(k|k), built by deleting from P directly
    so the p-notation route never touches the B = I-P evaluation path."""

    def __init__(self, P: SubstochasticMatrix):
        self.P = P.P
        self._inv: dict[int, DenseMatrix] = {}

    def inv(self, k: int) -> DenseMatrix:
        if k not in self._inv:
            sub = delete_row_col(self.P, k, k)
            reduced = DenseMatrix.identity(sub.n_rows, self.P.backend).sub(sub)
            self._inv[k] = inverse(reduced)
        return self._inv[k]


def _p_quotient_terms(cache: _DeletionCache, k: int):
    p = cache.P
    one = p.backend.one
    W = cache.inv(k)
    col_k = col_without(p, k)
    x = _bilinear(row_without(p, k), W, col_k)
    den = one - p.at(k, k) - x
    if den == 0:
        raise SingularSubmatrix(f"substochastic quotient denominator vanished at index {k}")
    return W, col_k, x, den


def _check_specialization(name, lhs, rhs, ref: IdentityReport, backend, tol):
    if backend.name == "exact":
        ok = lhs == ref.lhs and rhs == ref.rhs
    else:
        ok = backend.eq(lhs, ref.lhs, tol) and backend.eq(rhs, ref.rhs, tol)
    if not ok:
        raise InvariantViolation(
            f"{name} disagrees with its I-P specialization: "
            f"({lhs!r}, {rhs!r}) vs ({ref.lhs!r}, {ref.rhs!r})"
        )


def thm2_first(
    P: SubstochasticMatrix,
    m: int,
    tol=None,
    _cache: _DeletionCache | None = None,
    _general: GeneralMatrix | None = None,
) -> IdentityReport:
    """First substochastic identity, written directly in p-notation.

    lhs: p_{m.}((I-P)(m|m))^-1 p_{.m} / (1 - p_mm - ...)
    rhs: sum over k != m of p_km f_mk ((I-P)(k|k))^-1 p_{.k} / (1 - p_kk - ...).

    Also cross-checked against eq13_sides at B = I - P (the substitution
    b_mm = 1 - p_mm, b_km = -p_km is exact, so both sides must agree).
    """
    p = P.P
    n = p.require_square()
    if n < 2:
        raise MatrixTooSmall("need n >= 2")
    if not 1 <= m <= n:
        raise IndexOutOfRange(f"index {m} outside 1..{n}")
    cache = _cache or _DeletionCache(P)
    _, _, x, den = _p_quotient_terms(cache, m)
    lhs = x / den
    rhs = p.backend.zero
    for k in range(1, n + 1):
        if k == m:
            continue
        W_k, col_k, _, den_k = _p_quotient_terms(cache, k)
        f_mk = selector(m, k, n, p.backend)
        rhs = rhs + p.at(k, m) * f_mk.dot(mat_vec(W_k, col_k)) / den_k
    general = _general or certify_general(identity_minus(p))
    _check_specialization(
        "Thm2First", lhs, rhs, eq13_sides(general, m, tol), p.backend, tol
    )
    return _report(IdentityId.THM2_FIRST, m, None, lhs, rhs, p.backend, tol)


def thm2_second(
    P: SubstochasticMatrix,
    l: int,
    m: int,
    tol=None,
    _cache: _DeletionCache | None = None,
    _general: GeneralMatrix | None = None,
) -> IdentityReport:
    """Second substochastic identity, written directly in p-notation.

    lhs: (1-p_mm) f_lm ((I-P)(m|m))^-1 p_{.m} / (1 - p_mm - ...)
    rhs: p_lm / (1 - p_ll - ...) + sum over k != l,m of the k-th quotient.

    Cross-checked against eq20_sides at B = I - P.
    """
    p = P.P
    n = p.require_square()
    cache = _cache or _DeletionCache(P)
    f_lm = selector(l, m, n, p.backend)
    W_m, col_m, _, den_m = _p_quotient_terms(cache, m)
    lhs = (p.backend.one - p.at(m, m)) * f_lm.dot(mat_vec(W_m, col_m)) / den_m
    _, _, _, den_l = _p_quotient_terms(cache, l)
    rhs = p.at(l, m) / den_l
    for k in range(1, n + 1):
        if k == l or k == m:
            continue
        W_k, col_k, _, den_k = _p_quotient_terms(cache, k)
        f_lk = selector(l, k, n, p.backend)
        rhs = rhs + p.at(k, m) * f_lk.dot(mat_vec(W_k, col_k)) / den_k
    general = _general or certify_general(identity_minus(p))
    _check_specialization(
        "Thm2Second", lhs, rhs, eq20_sides(general, l, m, tol), p.backend, tol
    )
    return _report(IdentityId.THM2_SECOND, m, l, lhs, rhs, p.backend, tol)


def _general_reports(G: GeneralMatrix, tol) -> list[IdentityReport]:
    n = G.n
    out: list[IdentityReport] = []
    if n < 2:
        return out
    backend = G.backend
    for m in range(1, n + 1):
        for l in range(1, n + 1):
            if l == m:
                continue
            try:
                out.append(lemma1_sides(G, m, l, tol))
            except SubstochError as exc:
                out.append(_error_report(IdentityId.LEMMA1, m, l, backend, exc))
    for l in range(1, n + 1):
        try:
            out.append(lemma2_sides(G, l, tol))
        except SubstochError as exc:
            out.append(_error_report(IdentityId.LEMMA2, None, l, backend, exc))
    for m in range(1, n + 1):
        try:
            out.append(eq13_sides(G, m, tol))
        except SubstochError as exc:
            out.append(_error_report(IdentityId.EQ13, m, None, backend, exc))
        try:
            out.append(eq17_residual(G, m, tol))
        except SubstochError as exc:
            out.append(_error_report(IdentityId.EQ17, m, None, backend, exc))
    for m in range(1, n + 1):
        for l in range(1, n + 1):
            if l == m:
                continue
            try:
                out.append(eq20_sides(G, l, m, tol))
            except SubstochError as exc:
                out.append(_error_report(IdentityId.EQ20, m, l, backend, exc))
            try:
                out.append(eq21_residual(G, l, m, tol))
            except SubstochError as exc:
                out.append(_error_report(IdentityId.EQ21, m, l, backend, exc))
    return out


def verify_all(obj, tol=None) -> list[IdentityReport]:
    """Every applicable identity over every valid index combination.

    GeneralMatrix input runs the six general identities.  Substochastic
    input additionally runs both Thm2 identities and evaluates the general
    identities on B = I - P.  Errors are folded into failed reports rather
    than aborting the sweep; ordering is (identity, m, l).
    """
    if isinstance(obj, GeneralMatrix):
        reports = _general_reports(obj, tol)
    elif isinstance(obj, SubstochasticMatrix):
        general = certify_general(identity_minus(obj.P))
        reports = _general_reports(general, tol)
        cache = _DeletionCache(obj)
        n = obj.n
        backend = obj.P.backend
        if n >= 2:
            for m in range(1, n + 1):
                try:
                    reports.append(thm2_first(obj, m, tol, cache, general))
                except SubstochError as exc:
                    reports.append(
                        _error_report(IdentityId.THM2_FIRST, m, None, backend, exc)
                    )
            for m in range(1, n + 1):
                for l in range(1, n + 1):
                    if l == m:
                        continue
                    try:
                        reports.append(thm2_second(obj, l, m, tol, cache, general))
                    except SubstochError as exc:
                        reports.append(
                            _error_report(IdentityId.THM2_SECOND, m, l, backend, exc)
                        )
    else:
        raise TypeError("verify_all expects a GeneralMatrix or SubstochasticMatrix")
    reports.sort(key=IdentityReport.sort_key)
    return reports
