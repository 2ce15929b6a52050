"""Integer determinant backends against each other and a cofactor oracle."""

import random
from fractions import Fraction

from mbgram.intdet import (_is_prime, _primes_descending, bareiss_int, crt_det,
                           hadamard_bound, int_det)


def cofactor_det(rows):
    """Independent oracle: Laplace expansion, fine up to ~7x7."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        sign = -1 if j % 2 else 1
        total += sign * rows[0][j] * cofactor_det(minor)
    return total


def random_matrix(rng, n, lo=-99, hi=99):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


class TestBareiss:
    def test_tiny_cases(self):
        assert bareiss_int([]) == 1
        assert bareiss_int([[7]]) == 7
        assert bareiss_int([[1, 2], [3, 4]]) == -2

    def test_singular(self):
        assert bareiss_int([[1, 2], [2, 4]]) == 0
        assert bareiss_int([[0, 0], [1, 1]]) == 0

    def test_pivot_swap(self):
        assert bareiss_int([[0, 1], [1, 0]]) == -1
        assert bareiss_int([[0, 2, 1], [3, 0, 0], [0, 0, 4]]) == -24

    def test_against_cofactor_oracle(self):
        rng = random.Random(10)
        for n in range(1, 7):
            for _ in range(30):
                m = random_matrix(rng, n, -9, 9)
                assert bareiss_int(m) == cofactor_det(m), m

    def test_input_not_mutated(self):
        m = [[1, 2], [3, 4]]
        bareiss_int(m)
        assert m == [[1, 2], [3, 4]]


class TestCrt:
    def test_primality_helper(self):
        known = [2, 3, 5, 7, 2 ** 31 - 1]
        assert all(_is_prime(p) for p in known)
        assert not any(_is_prime(c) for c in (1, 4, 9, 2 ** 31 - 3))
        ps = _primes_descending(2 ** 31, 5)
        assert len(set(ps)) == 5 and all(_is_prime(p) for p in ps)

    def test_hadamard_bound_dominates(self):
        rng = random.Random(11)
        for n in range(1, 6):
            for _ in range(20):
                m = random_matrix(rng, n)
                assert abs(bareiss_int(m)) <= hadamard_bound(m)

    def test_matches_bareiss_small(self):
        rng = random.Random(12)
        for n in (1, 2, 5, 9):
            for _ in range(10):
                m = random_matrix(rng, n, -10 ** 6, 10 ** 6)
                assert crt_det(m) == bareiss_int(m)

    def test_matches_bareiss_medium(self):
        rng = random.Random(13)
        for _ in range(3):
            m = random_matrix(rng, 30, -10 ** 9, 10 ** 9)
            assert crt_det(m) == bareiss_int(m)

    def test_zero_row(self):
        m = [[0] * 8 for _ in range(8)]
        assert crt_det(m) == 0

    def test_diagonal(self):
        diag = [[0] * 25 for _ in range(25)]
        expected = 1
        for i in range(25):
            diag[i][i] = i + 2
            expected *= i + 2
        assert crt_det(diag) == expected

    def test_huge_entries_fall_back(self):
        big = 2 ** 70
        m = [[big, 1], [1, big]]
        assert crt_det(m) == big * big - 1

    def test_structured_singular_mod_prime(self):
        # determinant divisible by several of the CRT primes still comes out right
        p1, p2 = _primes_descending(2 ** 31, 2)
        m = [[p1 * p2, 0], [0, 1]]
        assert crt_det(m) == p1 * p2

    def test_dispatch(self):
        rng = random.Random(14)
        m = random_matrix(rng, 26, -10 ** 6, 10 ** 6)
        assert int_det(m) == bareiss_int(m)


class TestRationalCross:
    def test_fraction_elimination_oracle(self):
        # one more independent route: Gaussian elimination over Fraction
        rng = random.Random(15)
        for _ in range(10):
            n = rng.randint(2, 8)
            m = random_matrix(rng, n, -50, 50)
            frac = [[Fraction(v) for v in row] for row in m]
            det = Fraction(1)
            sign = 1
            for k in range(n):
                pivot_row = next((i for i in range(k, n) if frac[i][k]), None)
                if pivot_row is None:
                    det = Fraction(0)
                    break
                if pivot_row != k:
                    frac[k], frac[pivot_row] = frac[pivot_row], frac[k]
                    sign = -sign
                det *= frac[k][k]
                inv = 1 / frac[k][k]
                for i in range(k + 1, n):
                    factor = frac[i][k] * inv
                    for j in range(k, n):
                        frac[i][j] -= factor * frac[k][j]
            expected = int(det) * sign if det else 0
            assert bareiss_int(m) == expected
            assert int_det(m) == expected
