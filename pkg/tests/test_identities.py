from fractions import Fraction

import pytest

from substoch import (
    FLOAT,
    DenseMatrix,
    GeneralMatrix,
    IdentityId,
    certify_general,
    col_without,
    delete_row_col,
    determinant,
    eq13_sides,
    eq17_residual,
    eq20_sides,
    eq21_residual,
    identity_minus,
    lemma1_sides,
    lemma2_sides,
    mat_vec,
    row_without,
    schur_denominator,
    selector,
    thm2_first,
    thm2_second,
    validate_substochastic,
    verify_all,
)
from substoch.errors import SelectorUndefined, SingularSubmatrix
from substoch.generators import GenSpec, SplitMix64, derive_seed, gen_general, gen_substochastic

from .oracles import laplace_det, laplace_inverse


def mat(rows):
    return DenseMatrix.from_rows(rows)


TRIDIAG = [[2, 1, 0], [1, 2, 1], [0, 1, 2]]
P_EXAMPLE = [["1/2", "1/4"], ["1/3", "1/3"]]


def general_instances(count, sizes, base_seed):
    for i in range(count):
        spec = GenSpec(n=sizes[i % len(sizes)], seed=derive_seed(base_seed, i))
        yield gen_general(spec)


def substochastic_instances(count, sizes, base_seed):
    for i in range(count):
        spec = GenSpec(n=sizes[i % len(sizes)], seed=derive_seed(base_seed, i))
        yield gen_substochastic(spec)


# -- oracle evaluators (Laplace route only) -----------------------------------


def oracle_quotient(B: DenseMatrix, k: int):
    """(x, denominator) of the k-th Schur quotient via cofactor inverses."""
    W = laplace_inverse(delete_row_col(B, k, k))
    x = row_without(B, k).dot(mat_vec(W, col_without(B, k)))
    return x, B.at(k, k) - x


def oracle_eq13(B: DenseMatrix, m: int):
    n = B.n_rows
    x, den = oracle_quotient(B, m)
    lhs = x / den
    rhs = Fraction(0)
    for l in range(1, n + 1):
        if l == m:
            continue
        W = laplace_inverse(delete_row_col(B, l, l))
        _, den_l = oracle_quotient(B, l)
        f = selector(m, l, n)
        rhs += B.at(l, m) * f.dot(mat_vec(W, col_without(B, l))) / den_l
    return lhs, rhs


def oracle_eq20(B: DenseMatrix, l: int, m: int):
    n = B.n_rows
    W_m = laplace_inverse(delete_row_col(B, m, m))
    _, den_m = oracle_quotient(B, m)
    lhs = -B.at(m, m) * selector(l, m, n).dot(mat_vec(W_m, col_without(B, m))) / den_m
    _, den_l = oracle_quotient(B, l)
    rhs = -B.at(l, m) / den_l
    for k in range(1, n + 1):
        if k in (l, m):
            continue
        W_k = laplace_inverse(delete_row_col(B, k, k))
        _, den_k = oracle_quotient(B, k)
        rhs += B.at(k, m) * selector(l, k, n).dot(mat_vec(W_k, col_without(B, k))) / den_k
    return lhs, rhs


# -- certification --------------------------------------------------------------


def test_certify_rejects_singular():
    with pytest.raises(SingularSubmatrix):
        certify_general(mat([[1, 2], [2, 4]]))


def test_certify_rejects_zero_single_deletion_minor():
    # det = -1 but B(1|1) = [[0]]
    with pytest.raises(SingularSubmatrix):
        certify_general(mat([[0, 1], [1, 0]]))


def test_certify_all_principal_scope():
    G = certify_general(mat([[2, 1], [1, 2]]), all_principal=True)
    assert G.scope == "all_principal"
    with pytest.raises(SingularSubmatrix):
        certify_general(mat([[0, 1], [1, 1]]), all_principal=True)


def test_certify_n1():
    assert certify_general(mat([[5]])).det == 5
    with pytest.raises(SingularSubmatrix):
        certify_general(mat([[0]]))


# -- Schur denominator ------------------------------------------------------------


def test_schur_denominator_hand_case():
    G = certify_general(mat([[1, 2], [3, 4]]))
    assert schur_denominator(G, 1) == Fraction(-1, 2)
    assert schur_denominator(G, 1) == G.det / determinant(delete_row_col(G.B, 1, 1))


def test_schur_denominator_identity():
    G = certify_general(DenseMatrix.identity(4))
    for l in range(1, 5):
        assert schur_denominator(G, l) == 1


def test_schur_denominator_multiplicative_identity():
    for G in general_instances(8, [5], base_seed=11):
        for l in range(1, 6):
            den = schur_denominator(G, l)
            assert den * determinant(delete_row_col(G.B, l, l)) == determinant(G.B)


# -- Lemma 1 -----------------------------------------------------------------------


def test_lemma1_two_by_two():
    G = certify_general(mat([[1, 2], [3, 4]]))
    r = lemma1_sides(G, 1, 2)
    assert r.lhs == 2 and r.rhs == 2 and r.residual == 0 and r.passed


def test_lemma1_identity_matrix():
    G = certify_general(DenseMatrix.identity(3))
    for m in range(1, 4):
        for l in range(1, 4):
            if m != l:
                r = lemma1_sides(G, m, l)
                assert r.lhs == 0 and r.rhs == 0


def test_lemma1_all_pairs_with_laplace_rhs():
    for G in general_instances(4, [5], base_seed=21):
        n = 5
        for m in range(1, n + 1):
            for l in range(1, n + 1):
                if m == l:
                    continue
                r = lemma1_sides(G, m, l)
                assert r.residual == 0 and r.passed
                d = laplace_det(delete_row_col(G.B, l, m))
                expected = d if (m + l + 1) % 2 == 0 else -d
                assert r.rhs == expected


def test_lemma1_rejects_equal_indices():
    G = certify_general(mat(TRIDIAG))
    with pytest.raises(SelectorUndefined):
        lemma1_sides(G, 2, 2)


# -- Lemma 2 -----------------------------------------------------------------------


def test_lemma2_hand_case():
    G = certify_general(mat([[1, 2], [3, 4]]))
    r = lemma2_sides(G, 1)
    assert r.lhs == -2 and r.rhs == -2 and r.passed


def test_lemma2_identity_matrix():
    G = certify_general(DenseMatrix.identity(3))
    for l in range(1, 4):
        r = lemma2_sides(G, l)
        assert r.lhs == 1 and r.rhs == 1


def test_lemma2_random_sweep():
    for G in general_instances(4, [6], base_seed=31):
        for l in range(1, 7):
            r = lemma2_sides(G, l)
            assert r.residual == 0
            assert r.rhs == laplace_det(G.B)


# -- Eq. 13 / Eq. 17 ------------------------------------------------------------------


def test_eq13_tridiagonal_with_oracle():
    G = certify_general(mat(TRIDIAG))
    r = eq13_sides(G, 1)
    assert r.residual == 0 and r.passed
    lhs, rhs = oracle_eq13(G.B, 1)
    assert (r.lhs, r.rhs) == (lhs, rhs)


def test_eq13_identity_matrix():
    G = certify_general(DenseMatrix.identity(3))
    for m in range(1, 4):
        r = eq13_sides(G, m)
        assert r.lhs == 0 and r.rhs == 0


def test_eq17_hand_case():
    G = certify_general(mat([[2, 1], [1, 2]]))
    r = eq17_residual(G, 1)
    assert r.residual == 0 and r.passed


def test_eq17_identity_matrix():
    G = certify_general(DenseMatrix.identity(4))
    for m in range(1, 5):
        r = eq17_residual(G, m)
        assert r.lhs == 0 and r.rhs == 0


def test_eq13_eq17_equivalence():
    for G in general_instances(10, [3, 4, 5], base_seed=41):
        for m in range(1, G.n + 1):
            r13 = eq13_sides(G, m)
            r17 = eq17_residual(G, m)
            assert r13.residual == 0 and r17.residual == 0
            assert r13.lhs == r17.lhs  # same quotient, two routes


# -- Eq. 20 / Eq. 21 ------------------------------------------------------------------


def test_eq20_tridiagonal_with_oracle():
    G = certify_general(mat(TRIDIAG))
    r = eq20_sides(G, 1, 2)
    assert r.residual == 0 and r.passed
    lhs, rhs = oracle_eq20(G.B, 1, 2)
    assert (r.lhs, r.rhs) == (lhs, rhs)


def test_eq20_two_by_two_empty_sum():
    r = eq20_sides(certify_general(mat([[1, 2], [3, 4]])), 1, 2)
    assert r.lhs == 4 and r.rhs == 4 and r.residual == 0


def test_eq20_identity_matrix():
    G = certify_general(DenseMatrix.identity(3))
    for l in range(1, 4):
        for m in range(1, 4):
            if l != m:
                r = eq20_sides(G, l, m)
                assert r.lhs == 0 and r.rhs == 0


def test_eq21_tridiagonal():
    r = eq21_residual(certify_general(mat(TRIDIAG)), 3, 1)
    assert r.residual == 0 and r.passed


def test_eq21_identity_matrix():
    G = certify_general(DenseMatrix.identity(3))
    for l in range(1, 4):
        for m in range(1, 4):
            if l != m:
                r = eq21_residual(G, l, m)
                assert r.lhs == 0 and r.rhs == 0


def test_eq20_eq21_equivalence():
    for G in general_instances(8, [4, 5], base_seed=51):
        n = G.n
        for l in range(1, n + 1):
            for m in range(1, n + 1):
                if l == m:
                    continue
                assert eq20_sides(G, l, m).residual == 0
                assert eq21_residual(G, l, m).residual == 0


def test_column_replacement_annihilation_feeding_eq21():
    rng = SplitMix64(61)
    from .oracles import random_int_matrix

    for _ in range(4):
        B = random_int_matrix(rng, 5)
        for l in range(1, 6):
            for m in range(1, 6):
                if l == m:
                    continue
                total = Fraction(0)
                for k in range(1, 6):
                    term = B.at(k, m) * laplace_det(delete_row_col(B, k, l))
                    total += term if (k + l) % 2 == 0 else -term
                assert total == 0


# -- substochastic specializations (thm2_first / thm2_second) -----------------------


def test_thm2_first_zero_matrix():
    P = validate_substochastic(DenseMatrix.zeros(3, 3))
    for m in range(1, 4):
        r = thm2_first(P, m)
        assert r.lhs == 0 and r.rhs == 0


def test_thm2_first_hand_case():
    P = validate_substochastic(mat(P_EXAMPLE))
    r = thm2_first(P, 1)
    assert r.lhs == Fraction(1, 3)  # (1/8) / (3/8)
    assert r.residual == 0 and r.passed


def test_thm2_second_zero_matrix():
    P = validate_substochastic(DenseMatrix.zeros(3, 3))
    for m in range(1, 4):
        for l in range(1, 4):
            if l != m:
                r = thm2_second(P, l, m)
                assert r.lhs == 0 and r.rhs == 0


def test_thm2_second_hand_case():
    P = validate_substochastic(mat(P_EXAMPLE))
    r = thm2_second(P, 1, 2)
    assert r.residual == 0 and r.passed


def test_thm2_matches_general_specialization():
    for sub in substochastic_instances(12, [2, 3, 4, 5, 6], base_seed=71):
        B = certify_general(identity_minus(sub.P))
        n = sub.n
        for m in range(1, n + 1):
            r = thm2_first(sub, m)
            ref = eq13_sides(B, m)
            assert r.residual == 0
            assert (r.lhs, r.rhs) == (ref.lhs, ref.rhs)
        for m in range(1, n + 1):
            for l in range(1, n + 1):
                if l == m:
                    continue
                r = thm2_second(sub, l, m)
                ref = eq20_sides(B, l, m)
                assert r.residual == 0
                assert (r.lhs, r.rhs) == (ref.lhs, ref.rhs)


def test_thm2_selector_undefined():
    P = validate_substochastic(mat(P_EXAMPLE))
    with pytest.raises(SelectorUndefined):
        thm2_second(P, 2, 2)


# -- verify_all -------------------------------------------------------------------


def test_verify_all_identity_matrix():
    reports = verify_all(certify_general(DenseMatrix.identity(3)))
    assert reports and all(r.passed and r.residual == 0 for r in reports)


def test_verify_all_tridiagonal():
    reports = verify_all(certify_general(mat(TRIDIAG)))
    assert all(r.passed for r in reports)
    # 6 lemma1 + 3 lemma2 + 3 eq13 + 3 eq17 + 6 eq20 + 6 eq21
    assert len(reports) == 27


def test_verify_all_substochastic_includes_thm2():
    P = validate_substochastic(mat(P_EXAMPLE))
    reports = verify_all(P)
    ids = {r.identity for r in reports}
    assert IdentityId.THM2_FIRST in ids and IdentityId.THM2_SECOND in ids
    assert all(r.passed for r in reports)


def test_verify_all_ordering_deterministic():
    G = certify_general(mat(TRIDIAG))
    keys = [r.sort_key() for r in verify_all(G)]
    assert keys == sorted(keys)
    assert [r.sort_key() for r in verify_all(G)] == keys


def test_verify_all_float_backend_well_conditioned():
    for G in general_instances(5, [6], base_seed=81):
        Bf = G.B.to_float()
        minors_ok = all(
            abs(determinant(delete_row_col(Bf, l, l))) >= 1e-3 for l in range(1, 7)
        )
        if not minors_ok:
            continue
        reports = verify_all(certify_general(Bf), tol=1e-9)
        assert reports and all(r.passed for r in reports)


def test_verify_all_n1_empty():
    assert verify_all(certify_general(mat([[3]]))) == []


def test_verify_all_aggregates_errors_without_aborting():
    # bypass certification with a float matrix whose B(1|1) is exactly
    # singular: those reports carry errors, the rest still evaluate
    B = DenseMatrix.from_rows(
        [[1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 2.0]], FLOAT
    )
    G = GeneralMatrix(B, "denominators", determinant(B))
    reports = verify_all(G)
    assert any(r.error for r in reports)
    assert len(reports) == 27


def test_float_reports_respect_tolerance_formula():
    G = certify_general(mat(TRIDIAG).to_float())
    r = eq13_sides(G, 2, tol=1e-9)
    assert abs(r.residual) <= 1e-9 * (1 + max(abs(r.lhs), abs(r.rhs)))
    assert r.passed
