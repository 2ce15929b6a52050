"""Chebyshev polynomial generators and symbolic identity checks.

Both kinds live in Z[d] with the normalization T_0 = 2, T_1 = d and
S_0 = 1, S_1 = d, sharing the recurrence P_n = d*P_{n-1} - P_{n-2}.
Indices extend to negative n by running the recurrence downward, which
forces

    T_{-n} = T_n,        S_{-1} = 0,  S_{-n} = -S_{n-2}  (n >= 1).

Coefficients are produced in closed form (binomial sums, see _s_coeffs
and _t_coeffs), which is orders of magnitude faster than walking the
recurrence up to the default bound of 4096.  The recurrence itself is
asserted structurally in the test suite, both exhaustively for small
indices and at every large index class the identity checks touch, so the
closed form never goes unchecked.

The module also knows a catalog of ten named identities (IdentityId)
relating products, squares and index-doubling of T and S, including the
factorization of S at Mersenne indices into a product of T's.  Each
identity is verified by building both sides as expanded polynomials and
comparing structurally; failures are reported, never raised.
"""

from __future__ import annotations

import time
from enum import Enum
from math import comb
from typing import Callable, Iterable, Sequence

from mbgram.errors import BoundExceededError
from mbgram.polynomial import Polynomial
from mbgram.reporting import Report

DEFAULT_BOUND = 4096

NEGATIVE_INDEX_NOTE = (
    "negative S indices follow the downward recurrence: S_-1 = 0, S_-n = -S_(n-2)"
)


def _s_coeffs(n: int) -> dict:
    """Coefficients of S_n for n >= 0, as {degree: coefficient}.

    S_n = sum_j (-1)^j C(n-j, j) d^(n-2j).  The binomials are built
    incrementally: C(n-j-1, j+1) = C(n-j, j) * (n-2j)(n-2j-1) / ((j+1)(n-j)).
    """
    out = {}
    c = 1
    for j in range(n // 2 + 1):
        out[n - 2 * j] = -c if j & 1 else c
        num = (n - 2 * j) * (n - 2 * j - 1)
        den = (j + 1) * (n - j)
        if den and num > 0:
            c = c * num // den
    return out


def _t_coeffs(n: int) -> dict:
    """Coefficients of T_n for n >= 0, as {degree: coefficient}.

    For n >= 1 the degree n-2j coefficient is (-1)^j (C(n-j,j) + C(n-j-1,j-1)).
    """
    if n == 0:
        return {0: 2}
    out = {n: 1}
    for j in range(1, n // 2 + 1):
        c = comb(n - j, j) + comb(n - j - 1, j - 1)
        out[n - 2 * j] = -c if j & 1 else c
    return out


class _Memo:
    """Append-only per-kind memo table (safe under the GIL: plain dict)."""

    def __init__(self, builder: Callable[[int], dict]):
        self._builder = builder
        self._table: dict = {}

    def get(self, n: int) -> Polynomial:
        poly = self._table.get(n)
        if poly is None:
            poly = Polynomial.univariate("d", self._builder(n))
            self._table[n] = poly
        return poly


_T_MEMO = _Memo(_t_coeffs)
_S_MEMO = _Memo(_s_coeffs)


def cheb_T(n: int, bound: int = DEFAULT_BOUND) -> Polynomial:
    """First-kind polynomial T_n; T_{-n} = T_n."""
    if abs(n) > bound:
        raise BoundExceededError(f"|{n}| exceeds Chebyshev index bound {bound}")
    return _T_MEMO.get(abs(n))


def cheb_S(n: int, bound: int = DEFAULT_BOUND) -> Polynomial:
    """Second-kind polynomial S_n; S_{-1} = 0 and S_{-n} = -S_{n-2}."""
    if abs(n) > bound:
        raise BoundExceededError(f"|{n}| exceeds Chebyshev index bound {bound}")
    if n >= 0:
        return _S_MEMO.get(n)
    if n == -1:
        return Polynomial.zero()
    return -_S_MEMO.get(-n - 2)


class IdentityId(Enum):
    """Catalog of the checked closed-form identities."""

    PROD_TO_SUM_T = "ProdToSumT"    # T_m T_n = T_{m+n} + T_{|m-n|}
    PROD_TO_SUM_S = "ProdToSumS"    # S_n S_m = S_{|n-m|} + S_{|n-m|+2} + ... + S_{n+m}
    S_PROD_RECUR = "SProdRecur"     # S_n S_m = S_{m-1} S_{n-1} + S_{n+m}
    LEMMA_2_3A = "Lemma2_3a"        # T_{4n} - 2 = T_n^2 (T_n^2 - 4)
    LEMMA_2_3B = "Lemma2_3b"        # T_{2n} - 2 = T_n^2 - 4
    COR_2_4A = "Cor2_4a"            # T_{2^n}^2 - 4 = (T_2^2 - 4) prod_{i=1}^{n-1} T_{2^i}^2
    COR_2_4B = "Cor2_4b"            # T_{2^n} - 2 = (T_1^2 - 4) prod_{i=0}^{n-2} T_{2^i}^2
    LEMMA_2_5 = "Lemma2_5"          # T_n^2 - 4 = (d^2 - 4) S_{n-1}^2
    COR_2_6 = "Cor2_6"              # S_{2^k - 1} = prod_{i=0}^{k-1} T_{2^i}
    T_SQ_BRIDGE = "TSqBridge"       # T_n^2 - d^2 = S_n S_{n-2} (d^2 - 4)

    @classmethod
    def from_tag(cls, tag: str) -> "IdentityId":
        for member in cls:
            if member.value == tag:
                return member
        raise ValueError(f"unknown identity tag {tag!r}")


# each identity builder returns (lhs, rhs, uses_negative_index)

def _sum_of_S(lo: int, hi: int) -> Polynomial:
    total = Polynomial.zero()
    for i in range(lo, hi + 1, 2):
        total = total + cheb_S(i)
    return total


_S_PRODUCTS: dict = {}


def _s_product(m: int, n: int) -> Polynomial:
    """Memoized S_m * S_n; the product identities reuse the same pairs."""
    key = (m, n) if m <= n else (n, m)
    poly = _S_PRODUCTS.get(key)
    if poly is None:
        poly = cheb_S(key[0]) * cheb_S(key[1])
        _S_PRODUCTS[key] = poly
    return poly


def _prod_T_powers_of_two(lo: int, hi: int, squared: bool) -> Polynomial:
    total = Polynomial.one()
    for i in range(lo, hi + 1):
        t = cheb_T(2 ** i)
        total = total * (t * t if squared else t)
    return total


D_SQ_MINUS_4 = None  # filled lazily; Polynomial import-time work kept minimal


def _d2m4() -> Polynomial:
    global D_SQ_MINUS_4
    if D_SQ_MINUS_4 is None:
        d = Polynomial.variable("d")
        D_SQ_MINUS_4 = d * d - 4
    return D_SQ_MINUS_4


def _build_prod_to_sum_t(m: int, n: int):
    return cheb_T(m) * cheb_T(n), cheb_T(m + n) + cheb_T(abs(m - n)), False


def _build_prod_to_sum_s(m: int, n: int):
    return _s_product(n, m), _sum_of_S(abs(n - m), n + m), False


def _build_s_prod_recur(m: int, n: int):
    lhs = _s_product(n, m)
    if m >= 1 and n >= 1:
        rhs = _s_product(m - 1, n - 1) + cheb_S(n + m)
    else:
        rhs = cheb_S(m - 1) * cheb_S(n - 1) + cheb_S(n + m)
    return lhs, rhs, (m == 0 or n == 0)


def _build_lemma_2_3a(n: int):
    tn2 = cheb_T(n) * cheb_T(n)
    return cheb_T(4 * n) - 2, tn2 * (tn2 - 4), False


def _build_lemma_2_3b(n: int):
    return cheb_T(2 * n) - 2, cheb_T(n) * cheb_T(n) - 4, False


def _build_cor_2_4a(n: int):
    t = cheb_T(2 ** n)
    t2 = cheb_T(2)
    return t * t - 4, (t2 * t2 - 4) * _prod_T_powers_of_two(1, n - 1, squared=True), False


def _build_cor_2_4b(n: int):
    t1 = cheb_T(1)
    lhs = cheb_T(2 ** n) - 2
    return lhs, (t1 * t1 - 4) * _prod_T_powers_of_two(0, n - 2, squared=True), False


def _build_lemma_2_5(n: int):
    s = cheb_S(n - 1)
    return cheb_T(n) * cheb_T(n) - 4, _d2m4() * s * s, (n == 0)


def _build_cor_2_6(k: int):
    return cheb_S(2 ** k - 1), _prod_T_powers_of_two(0, k - 1, squared=False), False


def _build_t_sq_bridge(n: int):
    d = Polynomial.variable("d")
    lhs = cheb_T(n) * cheb_T(n) - d * d
    return lhs, cheb_S(n) * cheb_S(n - 2) * _d2m4(), (n <= 1)


# identity registry rows: (arity, minimum parameters, default maximum, builder).
# The default maxima keep every polynomial index within the generator bound:
# Cor2_4a/b and Cor2_6 index T and S at 2^n, so their parameter tops out at
# the exponent (2^10 resp. 2^12 - 1 = 4095), while the plain-index identities
# run the full 0..64 square.
_IDENTITY_SPECS = {
    IdentityId.PROD_TO_SUM_T: (2, (0, 0), 64, _build_prod_to_sum_t),
    IdentityId.PROD_TO_SUM_S: (2, (0, 0), 64, _build_prod_to_sum_s),
    IdentityId.S_PROD_RECUR: (2, (0, 0), 64, _build_s_prod_recur),
    IdentityId.LEMMA_2_3A: (1, (0,), 64, _build_lemma_2_3a),
    IdentityId.LEMMA_2_3B: (1, (0,), 64, _build_lemma_2_3b),
    # the power-of-two factorizations need a non-empty product side
    IdentityId.COR_2_4A: (1, (1,), 10, _build_cor_2_4a),
    IdentityId.COR_2_4B: (1, (1,), 10, _build_cor_2_4b),
    IdentityId.LEMMA_2_5: (1, (0,), 64, _build_lemma_2_5),
    IdentityId.COR_2_6: (1, (2,), 12, _build_cor_2_6),
    IdentityId.T_SQ_BRIDGE: (1, (0,), 64, _build_t_sq_bridge),
}


def identity_arity(identity: IdentityId) -> int:
    return _IDENTITY_SPECS[identity][0]


def identity_min_params(identity: IdentityId) -> tuple:
    return _IDENTITY_SPECS[identity][1]


def identity_default_max(identity: IdentityId) -> int:
    return _IDENTITY_SPECS[identity][2]


def verify_identity(identity: IdentityId, params: Iterable[Sequence[int]] | None = None,
                    max_index: int | None = None) -> Report:
    """Check one identity over a parameter range, structurally.

    `params` is an iterable of parameter tuples; when omitted, every tuple
    from the identity's minimum up to `max_index` (default: the identity's
    registry maximum) is checked.  Out-of-domain tuples (below the
    identity's minimum indices) are skipped and counted.  Mismatches
    become FAIL entries carrying both differing polynomials; nothing is
    raised.
    """
    arity, minima, default_max, builder = _IDENTITY_SPECS[identity]
    if max_index is None:
        max_index = default_max
    if identity is IdentityId.COR_2_6 and params is None:
        return _verify_mersenne(max_index, claim=identity.value, tag="chebyshev-identity")
    if params is None:
        if arity == 1:
            params = [(i,) for i in range(minima[0], max_index + 1)]
        else:
            params = [(m, n) for m in range(max_index + 1) for n in range(max_index + 1)]
    started = time.perf_counter()
    checked = 0
    skipped = 0
    used_negative = False
    for tup in params:
        tup = tuple(tup)
        if len(tup) != arity:
            raise ValueError(f"{identity.value} takes {arity} parameter(s), got {tup}")
        if any(t < lo for t, lo in zip(tup, minima)):
            skipped += 1
            continue
        lhs, rhs, negative = builder(*tup)
        used_negative = used_negative or negative
        if lhs != rhs:
            return Report(
                claim=identity.value,
                tag="chebyshev-identity",
                status="FAIL",
                params={"at": list(tup), "checked": checked, "skipped": skipped},
                witness={"lhs": lhs.to_json_obj(), "rhs": rhs.to_json_obj()},
                duration_s=time.perf_counter() - started,
            )
        checked += 1
    notes = [NEGATIVE_INDEX_NOTE] if used_negative else []
    return Report(
        claim=identity.value,
        tag="chebyshev-identity",
        status="PASS",
        params={"checked": checked, "skipped": skipped, "max_index": max_index},
        duration_s=time.perf_counter() - started,
        notes=notes,
    )


def _verify_mersenne(kmax: int, claim: str, tag: str) -> Report:
    """S_{2^k - 1} against the running product of T_{2^i} for k in 2..kmax.

    The product over i < k is extended one factor at a time, so the whole
    chain costs a single pass up to the largest index.
    """
    started = time.perf_counter()
    product = cheb_T(1)  # i = 0 factor
    for k in range(2, kmax + 1):
        product = product * cheb_T(2 ** (k - 1))
        expected = cheb_S(2 ** k - 1)
        if product != expected:
            return Report(
                claim=claim,
                tag=tag,
                status="FAIL",
                params={"at": [k]},
                witness={"lhs": expected.to_json_obj(), "rhs": product.to_json_obj()},
                duration_s=time.perf_counter() - started,
            )
    return Report(
        claim=claim,
        tag=tag,
        status="PASS",
        params={"checked": max(kmax - 1, 0), "skipped": 0, "max_index": kmax},
        duration_s=time.perf_counter() - started,
    )


def verify_mersenne_chain(kmax: int = 12) -> Report:
    """Factorization of S at Mersenne indices, as a standalone cross-check."""
    return _verify_mersenne(kmax, claim="Cor2_6", tag="mersenne-chain")
