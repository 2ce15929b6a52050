"""Gram assembly, determinant backends, closed forms, and verification drivers."""

import random

import pytest

from mbgram.errors import BoundExceededError
from mbgram.gram import (ConjectureId, GramMatrix, GramVariant, assemble_gram,
                         choose_backend, class_matrix_4x4, conjecture_factors,
                         conjecture_formula, default_degree_bounds, det_by_evaluation,
                         det_exact, equal_up_to_simultaneous_permutation,
                         formula_value_at, get_det, get_gram, total_degree_bound,
                         verify_conjecture, verify_formula_identity, verify_theorem_3_6)
from mbgram.polynomial import Polynomial

D = Polynomial.variable("d")
W = Polynomial.variable("w")
X = Polynomial.variable("x")
Y = Polynomial.variable("y")
Z = Polynomial.variable("z")

# the hand-derived 3x3 determinant of the n=1 full matrix
N1_FULL_DET = (D - Z) * ((D + Z) * W - 2 * X * Y)


def poly_cofactor_det(rows):
    """Independent oracle: Laplace expansion over Polynomial entries."""
    n = len(rows)
    if n == 0:
        return Polynomial.one()
    if n == 1:
        return rows[0][0]
    total = Polynomial.zero()
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = entry * poly_cofactor_det(minor)
        total = total + (-term if j % 2 else term)
    return total


class TestAssemble:
    def test_n1_full_matrix(self):
        gm = assemble_gram(1, GramVariant.MB1_FULL)
        assert [m.serialize() for m in gm.basis] == ["(1 2)", "(2 1)", "(1)(2)"]
        expected = [[D, Z, Y], [Z, D, Y], [X, X, W]]
        assert gm.rows() == expected

    def test_n2_tilde_matches_class_matrix(self):
        gm = assemble_gram(2, GramVariant.MBN1_TILDE)
        assert equal_up_to_simultaneous_permutation(gm.rows(), class_matrix_4x4(1))

    def test_sizes(self):
        assert assemble_gram(3, GramVariant.MBN1).size == 15
        assert assemble_gram(2, GramVariant.MB1_FULL).size == 10
        assert GramVariant.MBN1_TILDE.size(4) == 56

    def test_tilde_entries_carry_only_d(self):
        for n in (1, 2, 3):
            gm = assemble_gram(n, GramVariant.MBN1_TILDE)
            for row in gm.entries:
                for entry in row:
                    assert set(entry.variables_used()) <= {"d"}

    def test_tilde_diagonal(self):
        gm = assemble_gram(3, GramVariant.MBN1_TILDE)
        for i in range(gm.size):
            assert gm.entries[i][i] == D ** 2

    def test_transpose_exchanges_xy(self):
        gm = assemble_gram(2, GramVariant.MB1_FULL)
        swap = {"x": Y, "y": X}
        for i in range(gm.size):
            for j in range(gm.size):
                assert gm.entries[j][i] == gm.entries[i][j].substitute(swap)

    def test_bound_enforced(self):
        with pytest.raises(BoundExceededError):
            assemble_gram(5, GramVariant.MB1_FULL)

    def test_json_roundtrip(self):
        gm = assemble_gram(2, GramVariant.MBN1)
        again = GramMatrix.from_json_obj(gm.to_json_obj())
        assert again.basis == gm.basis
        assert again.entries == gm.entries


class TestDetExact:
    def test_one_by_one(self):
        assert det_exact([[D ** 3]]) == D ** 3

    def test_class_matrix_hand_value(self):
        # cofactor expansion by hand gives d^4 - 4 d^2 = d^2 (d^2 - 4)
        expected = Polynomial.univariate("d", {4: 1, 2: -4})
        assert det_exact(class_matrix_4x4(1)) == expected
        assert poly_cofactor_det(class_matrix_4x4(1)) == expected

    def test_n1_full_hand_value(self):
        gm = assemble_gram(1, GramVariant.MB1_FULL)
        assert det_exact(gm) == N1_FULL_DET
        assert poly_cofactor_det(gm.rows()) == N1_FULL_DET

    def test_against_cofactor_oracle(self):
        for n, variant in ((1, GramVariant.MB1_FULL), (2, GramVariant.MBN1),
                           (2, GramVariant.MBN1_TILDE)):
            gm = assemble_gram(n, variant)
            assert det_exact(gm) == poly_cofactor_det(gm.rows())

    def test_zero_pivot_column_swap(self):
        m = [[Polynomial.zero(), D], [D, Polynomial.zero()]]
        assert det_exact(m) == -(D * D)

    def test_singular(self):
        m = [[D, D], [D, D]]
        assert det_exact(m).is_zero()

    def test_permutation_invariance(self):
        rng = random.Random(20)
        for n, variant in ((2, GramVariant.MBN1_TILDE), (1, GramVariant.MB1_FULL),
                           (3, GramVariant.MBN1_TILDE)):
            gm = assemble_gram(n, variant)
            base = det_exact(gm)
            rows = gm.rows()
            for _ in range(3):
                perm = list(range(gm.size))
                rng.shuffle(perm)
                permuted = [[rows[perm[i]][perm[j]] for j in range(gm.size)]
                            for i in range(gm.size)]
                assert det_exact(permuted) == base


class TestDetByEvaluation:
    def test_class_matrix(self):
        expected = Polynomial.univariate("d", {4: 1, 2: -4})
        assert det_by_evaluation(class_matrix_4x4(1), ["d"], {"d": 8}) == expected

    def test_diagonal(self):
        m = [[D, Polynomial.zero()], [Polynomial.zero(), D * D]]
        assert det_by_evaluation(m) == D ** 3

    def test_multivariate(self):
        gm = assemble_gram(1, GramVariant.MB1_FULL)
        assert det_by_evaluation(gm) == N1_FULL_DET

    def test_matches_exact_on_tilde(self):
        for n in (2, 3):
            gm = assemble_gram(n, GramVariant.MBN1_TILDE)
            assert det_by_evaluation(gm) == det_exact(gm)

    def test_default_bounds_rule(self):
        rows = class_matrix_4x4(1)
        assert default_degree_bounds(rows, ["d"]) == {"d": 4 * 1}
        gm = assemble_gram(2, GramVariant.MBN1)
        bounds = default_degree_bounds(gm.rows(), ["d", "w"])
        assert bounds == {"d": 4, "w": 4}

    def test_integer_matrix(self):
        m = [[Polynomial.integer(3), Polynomial.integer(1)],
             [Polynomial.integer(1), Polynomial.integer(2)]]
        assert det_by_evaluation(m) == 5


class TestCrossover:
    def test_small_goes_to_elimination(self):
        assert choose_backend(class_matrix_4x4(1)) == "bareiss"

    def test_many_variables_go_to_elimination(self):
        gm = assemble_gram(3, GramVariant.MB1_FULL)  # 35x35, five variables
        assert choose_backend(gm) == "bareiss"

    def test_large_univariate_goes_to_interpolation(self, tmp_path):
        gm = get_gram(4, GramVariant.MBN1_TILDE, cache_dir=tmp_path)
        assert gm.size == 56
        assert choose_backend(gm) == "interp"


class TestFormulas:
    def test_tilde_via_s_n2(self):
        assert conjecture_formula(ConjectureId.C3_5, 2) == (D * D - 4) * D * D

    def test_tilde_via_t_n2(self):
        expected = Polynomial.univariate("d", {4: 1, 2: -4})  # T_4 - 2
        assert conjecture_formula(ConjectureId.C3_3, 2) == expected

    def test_full_basis_n1(self):
        assert conjecture_formula(ConjectureId.C3_4, 1) == N1_FULL_DET

    def test_minimum_n(self):
        with pytest.raises(ValueError):
            conjecture_formula(ConjectureId.C3_5, 1)
        with pytest.raises(ValueError):
            conjecture_factors(ConjectureId.C3_3, 0)

    def test_expansion_guard(self):
        with pytest.raises(BoundExceededError):
            conjecture_formula(ConjectureId.C3_3, 8)

    def test_formula_identity_factorwise(self):
        report = verify_formula_identity(8)
        assert report.status == "PASS"
        assert report.params["comparison"] == "factorwise"

    def test_value_at_matches_expansion(self):
        point = {"d": 7, "w": 3, "x": -2, "y": 5, "z": -4}
        for cid, n in ((ConjectureId.C3_5, 3), (ConjectureId.C3_4, 2)):
            expanded = conjecture_formula(cid, n)
            assert expanded.evaluate(point) == formula_value_at(cid, n, point)

    def test_whole_band_trailing_blocks(self):
        # the i = 1 trailing block of the whole-band form repeats the
        # substituted-family factors
        n = 3
        factors = conjecture_factors(ConjectureId.C5_1, n)
        tilde = conjecture_factors(ConjectureId.C3_5, n)
        trailing_len = sum(2 * (n - i) for i in range(1, n + 1))
        block_i1 = factors[-trailing_len:][: len(tilde)]
        assert [(str(f), e) for f, e in block_i1] == [(str(f), e) for f, e in tilde]


class TestVerification:
    def test_c3_5_exact_small(self, tmp_path):
        report = verify_conjecture(ConjectureId.C3_5, 2, cache_dir=tmp_path)
        assert report.status == "PASS"
        assert report.backend == "bareiss"

    def test_c3_4_exact_n1(self, tmp_path):
        report = verify_conjecture(ConjectureId.C3_4, 1, cache_dir=tmp_path)
        assert report.status == "PASS"

    def test_c3_4_randomized_matches_exact(self, tmp_path):
        report = verify_conjecture(ConjectureId.C3_4, 2, method="randomized",
                                   seed=7, points=4, cache_dir=tmp_path)
        assert report.status == "PASS"
        assert report.seed == 7
        assert 0 < report.params["failure_bound"] < 2 ** -40

    def test_randomized_independent_of_jobs(self, tmp_path):
        # size 35 exceeds the pool threshold, so jobs=2 takes the worker path
        serial = verify_conjecture(ConjectureId.C3_4, 3, method="randomized",
                                   seed=11, points=3, jobs=1, cache_dir=tmp_path)
        pooled = verify_conjecture(ConjectureId.C3_4, 3, method="randomized",
                                   seed=11, points=3, jobs=2, cache_dir=tmp_path)
        assert serial.canonical_json() == pooled.canonical_json()
        assert serial.status == "PASS"

    def test_c5_1_skipped(self, tmp_path):
        report = verify_conjecture(ConjectureId.C5_1, 3, cache_dir=tmp_path)
        assert report.status == "SKIPPED"

    def test_theorem_divisibility_n2(self, tmp_path):
        report = verify_theorem_3_6(2, cache_dir=tmp_path)
        assert report.status == "PASS"
        assert report.params["divisor_exponent"] == 2
        quotient = Polynomial.from_json_obj(report.witness["quotient"])
        assert quotient == D * D - 4

    def test_degree_bound_covers_true_degree(self, tmp_path):
        gm = get_gram(2, GramVariant.MB1_FULL, cache_dir=tmp_path)
        det = det_exact(gm)
        assert det.total_degree() <= total_degree_bound(gm)


class TestCaching:
    def test_gram_cache_roundtrip(self, tmp_path):
        first = get_gram(2, GramVariant.MBN1_TILDE, cache_dir=tmp_path)
        assert (tmp_path / "gram_tilde_2.json").exists()
        second = get_gram(2, GramVariant.MBN1_TILDE, cache_dir=tmp_path)
        assert first.entries == second.entries

    def test_det_cache_roundtrip(self, tmp_path):
        det1, prov1 = get_det(2, GramVariant.MBN1_TILDE, cache_dir=tmp_path)
        assert prov1["backend"] == "bareiss"
        det2, prov2 = get_det(2, GramVariant.MBN1_TILDE, cache_dir=tmp_path)
        assert det1 == det2
        assert prov2["backend"] == "bareiss"

    def test_corrupt_cache_recomputed(self, tmp_path):
        get_det(2, GramVariant.MBN1_TILDE, cache_dir=tmp_path)
        path = tmp_path / "det_tilde_2.json"
        path.write_text(path.read_text().replace('"terms"', '"wrong"', 1))
        det, _ = get_det(2, GramVariant.MBN1_TILDE, cache_dir=tmp_path)
        assert det == Polynomial.univariate("d", {4: 1, 2: -4})


class TestPermutationHelper:
    def test_positive(self):
        a = [[1, 2], [3, 4]]
        b = [[4, 3], [2, 1]]
        assert equal_up_to_simultaneous_permutation(a, b)

    def test_negative(self):
        a = [[1, 2], [3, 4]]
        b = [[1, 2], [4, 3]]
        assert not equal_up_to_simultaneous_permutation(a, b)
