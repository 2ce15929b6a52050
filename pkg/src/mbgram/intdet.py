"""Exact determinants of integer matrices.

Two interchangeable backends:

  * bareiss_int: fraction-free elimination over Python big integers.
    Every interior division is exact (Sylvester's identity), so the
    result is exact for any size; intermediate growth makes it slow past
    roughly 40x40.

  * crt_det: evaluate the determinant modulo enough 31-bit primes to
    exceed twice the Hadamard bound, with numpy int64 elimination batched
    across all primes at once, then recombine by the Chinese remainder
    theorem.  Requires the input entries to fit int64; falls back to
    bareiss_int otherwise.

int_det picks a backend automatically.  Both are cross-checked against
each other in the test suite.
"""

from __future__ import annotations

from math import isqrt, prod

import numpy as np

_INT64_SAFE = 2 ** 62  # entries must stay clear of int64 limits
_CRT_MIN_SIZE = 24     # below this, plain Bareiss wins

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin for p < 3.3e24 (we only need ~2^31)."""
    if p < 2:
        return False
    for q in _MR_BASES:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def _primes_descending(start: int, count: int) -> list:
    out = []
    c = start if start % 2 else start - 1
    while len(out) < count:
        if _is_prime(c):
            out.append(c)
        c -= 2
    return out


def hadamard_bound(rows: list) -> int:
    """Integer upper bound on |det| (product of row Euclidean norms)."""
    prod_sq = 1
    for row in rows:
        s = sum(v * v for v in row)
        if s == 0:
            return 0
        prod_sq *= s
    return isqrt(prod_sq) + 1


def bareiss_int(rows: list) -> int:
    """Fraction-free elimination over Z; exact for any size."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    if any(len(r) != n for r in m):
        raise ValueError("matrix must be square")
    if n == 1:
        return m[0][0]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _det_mod_single(a: np.ndarray, p: int) -> int:
    """Gaussian elimination mod one prime, with row pivoting."""
    m = np.mod(a, p).astype(np.int64)
    n = m.shape[0]
    det = 1
    for k in range(n):
        col = m[k:, k]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            return 0
        i = k + int(nz[0])
        if i != k:
            m[[k, i]] = m[[i, k]]
            det = -det
        piv = int(m[k, k])
        det = det * piv % p
        if k + 1 < n:
            inv = pow(piv, p - 2, p)
            f = m[k + 1:, k] * inv % p
            m[k + 1:, k:] = (m[k + 1:, k:] - f[:, None] * m[k, k:]) % p
    return det % p


def _dets_mod_batched(a: np.ndarray, primes: list) -> list:
    """Determinant residues for all primes at once (no pivot search).

    Primes that hit a zero pivot in the shared elimination order are
    retried individually with pivoting; with 31-bit primes this is rare.
    """
    parr = np.array(primes, dtype=np.int64)
    m = np.mod(a[None, :, :], parr[:, None, None])
    n = a.shape[0]
    np_ = len(primes)
    dets = np.ones(np_, dtype=np.int64)
    bad = np.zeros(np_, dtype=bool)
    for k in range(n):
        piv = m[:, k, k].copy()
        zero = (piv == 0) & ~bad
        if zero.any():
            bad |= zero
        piv[bad] = 1
        dets = dets * piv % parr
        if k + 1 < n:
            inv = np.array([pow(int(v), int(p) - 2, int(p))
                            for v, p in zip(piv, parr)], dtype=np.int64)
            f = m[:, k + 1:, k] * inv[:, None] % parr[:, None]
            m[:, k + 1:, k:] = (m[:, k + 1:, k:]
                                - f[:, :, None] * m[:, k, None, k:]) % parr[:, None, None]
    out = []
    for i, p in enumerate(primes):
        if bad[i]:
            out.append(_det_mod_single(a, int(p)))
        else:
            out.append(int(dets[i]) % int(p))
    return out


def _crt(residues: list, primes: list) -> int:
    x = 0
    modulus = 1
    for r, p in zip(residues, primes):
        delta = (r - x) % p
        delta = delta * pow(modulus % p, p - 2, p) % p
        x += modulus * delta
        modulus *= p
    if x > modulus // 2:
        x -= modulus
    return x


def crt_det(rows: list) -> int:
    """Exact determinant via residues modulo 31-bit primes."""
    n = len(rows)
    if n == 0:
        return 1
    bound = hadamard_bound(rows)
    if bound == 0:
        return 0
    if max(abs(v) for row in rows for v in row) >= _INT64_SAFE:
        return bareiss_int(rows)
    # product of primes must exceed 2 * bound
    target_bits = bound.bit_length() + 2
    count = target_bits // 30 + 1
    primes = _primes_descending(2 ** 31, count)
    while prod(primes) <= 2 * bound:
        primes += _primes_descending(primes[-1] - 2, 1)
    a = np.array(rows, dtype=np.int64)
    residues = _dets_mod_batched(a, primes)
    return _crt(residues, primes)


def int_det(rows: list) -> int:
    """Exact integer determinant; backend chosen by size."""
    n = len(rows)
    if n < _CRT_MIN_SIZE:
        return bareiss_int(rows)
    return crt_det(rows)
