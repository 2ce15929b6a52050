"""Exact sparse polynomial arithmetic over Z[d, w, x, y, z].

A polynomial is a map from exponent vectors to big-integer coefficients:

    terms = {(e_d, e_w, e_x, e_y, e_z): coefficient, ...}

Zero coefficients are never stored, so structural equality of the term
maps is polynomial equality.  The variable universe is fixed to the five
symbols d, w, x, y, z with the total order d < w < x < y < z.  Monomials
are ordered graded-lexicographically: first by total degree, ties broken
by comparing the exponent vector (d most significant).  Serialization
lists terms in descending canonical order (leading term first), as

    [[coef, e_d, e_w, e_x, e_y, e_z], ...]

inside a versioned JSON envelope.  All coefficients are Python ints, so
nothing ever overflows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from mbgram.errors import NonIntegralResultError

VARIABLES = ("d", "w", "x", "y", "z")
VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}
NVARS = len(VARIABLES)
ZERO_EXP = (0,) * NVARS

POLY_FORMAT = "mbgram.poly/1"

Exponents = tuple  # length-5 tuple of non-negative ints
PolyLike = Union["Polynomial", int]


def _check_var(name: str) -> int:
    try:
        return VAR_INDEX[name]
    except KeyError:
        raise ValueError(f"unknown variable {name!r}; universe is {VARIABLES}") from None


def monomial_key(exps: Exponents):
    """Canonical graded-lex sort key; the leading term has the largest key."""
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial with exact integer coefficients.

    Instances must never be mutated after construction; all operations
    return new objects, which makes values safe to share across workers.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponents, int] | None = None, _raw: dict | None = None):
        if _raw is not None:
            # internal fast path: caller guarantees canonical form
            self._terms = _raw
            return
        clean: dict = {}
        if terms:
            for exps, coef in terms.items():
                if coef:
                    exps = tuple(exps)
                    if len(exps) != NVARS or any(e < 0 for e in exps):
                        raise ValueError(f"bad exponent vector {exps!r}")
                    clean[exps] = clean.get(exps, 0) + coef
        self._terms = {e: c for e, c in clean.items() if c}

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(_raw={})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls(_raw={ZERO_EXP: 1})

    @classmethod
    def integer(cls, c: int) -> "Polynomial":
        return cls(_raw={ZERO_EXP: c} if c else {})

    @classmethod
    def variable(cls, name: str) -> "Polynomial":
        i = _check_var(name)
        exps = tuple(1 if j == i else 0 for j in range(NVARS))
        return cls(_raw={exps: 1})

    @classmethod
    def monomial(cls, coef: int, exps_by_var: Mapping[str, int]) -> "Polynomial":
        exps = [0] * NVARS
        for name, e in exps_by_var.items():
            if e < 0:
                raise ValueError(f"negative exponent for {name!r}")
            exps[_check_var(name)] = e
        return cls(_raw={tuple(exps): coef} if coef else {})

    @classmethod
    def univariate(cls, name: str, coeffs_by_degree: Mapping[int, int]) -> "Polynomial":
        i = _check_var(name)
        raw = {}
        for deg, c in coeffs_by_degree.items():
            if c:
                exps = [0] * NVARS
                exps[i] = deg
                raw[tuple(exps)] = c
        return cls(_raw=raw)

    # -- basic queries ----------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponents, int]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_integer(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ZERO_EXP in self._terms)

    def as_integer(self) -> int:
        if not self._terms:
            return 0
        if len(self._terms) == 1 and ZERO_EXP in self._terms:
            return self._terms[ZERO_EXP]
        raise ValueError(f"not a constant: {self}")

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def num_terms(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        """Max total degree over terms; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, name: str) -> int:
        """Max exponent of one variable; -1 for the zero polynomial."""
        i = _check_var(name)
        if not self._terms:
            return -1
        return max(e[i] for e in self._terms)

    def variables_used(self) -> tuple:
        used = [False] * NVARS
        for exps in self._terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(VARIABLES[i] for i in range(NVARS) if used[i])

    def leading_term(self) -> tuple:
        """(exps, coef) of the canonically largest monomial; p must be nonzero."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self._terms, key=monomial_key)
        return exps, self._terms[exps]

    def sorted_terms(self) -> list:
        """Terms as (exps, coef), leading term first."""
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: PolyLike) -> "Polynomial":
        other = _coerce(other)
        if not self._terms:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for exps, coef in other._terms.items():
            s = out.get(exps, 0) + coef
            if s:
                out[exps] = s
            elif exps in out:
                del out[exps]
        return Polynomial(_raw=out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(_raw={e: -c for e, c in self._terms.items()})

    def __sub__(self, other: PolyLike) -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other: PolyLike) -> "Polynomial":
        return _coerce(other) + (-self)

    def __mul__(self, other: PolyLike) -> "Polynomial":
        other = _coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return Polynomial.zero()
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            (ea, ca), = a.items()
            if ea == ZERO_EXP:
                return Polynomial(_raw={e: ca * c for e, c in b.items()})
            return Polynomial(_raw={
                (ea[0] + e[0], ea[1] + e[1], ea[2] + e[2], ea[3] + e[3], ea[4] + e[4]): ca * c
                for e, c in b.items()
            })
        out: dict = {}
        get = out.get
        for ea, ca in a.items():
            a0, a1, a2, a3, a4 = ea
            for eb, cb in b.items():
                k = (a0 + eb[0], a1 + eb[1], a2 + eb[2], a3 + eb[3], a4 + eb[4])
                v = get(k)
                out[k] = ca * cb if v is None else v + ca * cb
        return Polynomial(_raw={e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self._terms == ({ZERO_EXP: other} if other else {})
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        return NotImplemented

    __hash__ = None  # mutable-dict backed; never use as a mapping key

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- substitution and evaluation ----------------------------------------

    def substitute(self, bindings: Mapping[str, PolyLike]) -> "Polynomial":
        """Simultaneously substitute polynomials (or ints) for variables.

        Unbound variables are left untouched.
        """
        if not bindings:
            return self
        subs = {_check_var(name): _coerce(val) for name, val in bindings.items()}
        result = Polynomial.zero()
        for exps, coef in self._terms.items():
            residual = list(exps)
            factor = Polynomial.integer(coef)
            for i, repl in subs.items():
                e = exps[i]
                if e:
                    residual[i] = 0
                    factor = factor * repl ** e
                    if factor.is_zero():
                        break
            if factor.is_zero():
                continue
            result = result + factor * Polynomial(_raw={tuple(residual): 1})
        return result

    def evaluate(self, point: Mapping[str, int]) -> int:
        """Evaluate at an integer point; every used variable must be bound."""
        vals = [None] * NVARS
        for name, v in point.items():
            vals[_check_var(name)] = v
        total = 0
        for exps, coef in self._terms.items():
            term = coef
            for i, e in enumerate(exps):
                if e:
                    if vals[i] is None:
                        raise ValueError(f"variable {VARIABLES[i]!r} unbound in evaluation")
                    term *= vals[i] ** e
            total += term
        return total

    def eval_var(self, name: str, value: int) -> "Polynomial":
        """Partially evaluate one variable at an integer, keeping the rest."""
        i = _check_var(name)
        out: dict = {}
        for exps, coef in self._terms.items():
            e = exps[i]
            if e:
                coef = coef * value ** e
                if not coef:
                    continue
                exps = exps[:i] + (0,) + exps[i + 1:]
            s = out.get(exps, 0) + coef
            if s:
                out[exps] = s
            elif exps in out:
                del out[exps]
        return Polynomial(_raw=out)

    # -- exact division ------------------------------------------------------

    def divide_exact(self, divisor: "Polynomial") -> "Polynomial | None":
        """Return q with divisor * q == self, or None when not divisible.

        Long division with respect to the canonical monomial order; the
        remainder must come out zero.  Raises ZeroDivisionError for a zero
        divisor.
        """
        divisor = _coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Polynomial.zero()
        lead_exps, lead_coef = divisor.leading_term()
        remainder = dict(self._terms)
        quotient: dict = {}
        while remainder:
            r_exps = max(remainder, key=monomial_key)
            r_coef = remainder[r_exps]
            q_exps = tuple(r - l for r, l in zip(r_exps, lead_exps))
            if any(e < 0 for e in q_exps) or r_coef % lead_coef:
                return None
            q_coef = r_coef // lead_coef
            quotient[q_exps] = q_coef
            for exps, coef in divisor._terms.items():
                k = (q_exps[0] + exps[0], q_exps[1] + exps[1], q_exps[2] + exps[2],
                     q_exps[3] + exps[3], q_exps[4] + exps[4])
                s = remainder.get(k, 0) - q_coef * coef
                if s:
                    remainder[k] = s
                elif k in remainder:
                    del remainder[k]
        return Polynomial(_raw=quotient)

    # -- serialization ---------------------------------------------------------

    def to_terms_obj(self) -> list:
        """JSON-ready term list [[coef, e_d, e_w, e_x, e_y, e_z], ...]."""
        return [[coef, *exps] for exps, coef in self.sorted_terms()]

    @classmethod
    def from_terms_obj(cls, obj: Iterable[Sequence[int]]) -> "Polynomial":
        raw = {}
        for row in obj:
            coef, *exps = row
            if len(exps) != NVARS:
                raise ValueError(f"term row must have {NVARS + 1} entries: {row!r}")
            if coef:
                raw[tuple(int(e) for e in exps)] = int(coef)
        return cls(_raw=raw)

    def to_json_obj(self) -> dict:
        return {"format": POLY_FORMAT, "terms": self.to_terms_obj()}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Polynomial":
        if obj.get("format") != POLY_FORMAT:
            raise ValueError(f"unsupported polynomial envelope: {obj.get('format')!r}")
        return cls.from_terms_obj(obj["terms"])

    # -- display -----------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, coef in self.sorted_terms():
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(VARIABLES[i])
                elif e > 1:
                    factors.append(f"{VARIABLES[i]}^{e}")
            body = "*".join(factors)
            if not body:
                mag = str(abs(coef))
            elif abs(coef) == 1:
                mag = body
            else:
                mag = f"{abs(coef)}*{body}"
            if not parts:
                parts.append(mag if coef > 0 else f"-{mag}")
            else:
                parts.append(f"+ {mag}" if coef > 0 else f"- {mag}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def _coerce(value: PolyLike) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, int):
        return Polynomial.integer(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to Polynomial")


# -- interpolation ------------------------------------------------------------


def interpolate(var: str, points: Sequence[tuple]) -> Polynomial:
    """Reconstruct a polynomial in `var` from (abscissa, value) samples.

    Values are Polynomials (or ints) in the remaining variables.  Uses
    Newton divided differences over exact rationals; the result of degree
    < len(points) is unique, and for an integer polynomial all rational
    intermediates must clear, otherwise NonIntegralResultError is raised
    (the classic symptom of a degree bound that was too small upstream).
    """
    if not points:
        raise ValueError("need at least one interpolation point")
    vi = _check_var(var)
    xs = [int(t) for t, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation abscissae must be pairwise distinct")
    for _, val in points:
        v = _coerce(val)
        if v.degree_in(var) > 0:
            raise ValueError(f"interpolation values must not contain {var!r}")

    # divided-difference table over {exponents: Fraction}
    table = [{e: Fraction(c) for e, c in _coerce(val)._terms.items()} for _, val in points]
    k = len(points)
    for level in range(1, k):
        for i in range(k - 1, level - 1, -1):
            hi, lo = table[i], table[i - 1]
            dx = xs[i] - xs[i - level]
            diff = dict(hi)
            for e, c in lo.items():
                s = diff.get(e, 0) - c
                if s:
                    diff[e] = s
                elif e in diff:
                    del diff[e]
            table[i] = {e: c / dx for e, c in diff.items()}

    # Horner assembly: p = dd[k-1]; p = p*(X - x_i) + dd[i] going down
    acc = table[k - 1]
    for i in range(k - 2, -1, -1):
        shifted: dict = {}
        for e, c in acc.items():
            e_up = e[:vi] + (e[vi] + 1,) + e[vi + 1:]
            shifted[e_up] = shifted.get(e_up, 0) + c
            if xs[i]:
                s = shifted.get(e, 0) - xs[i] * c
                if s:
                    shifted[e] = s
                elif e in shifted:
                    del shifted[e]
        for e, c in table[i].items():
            s = shifted.get(e, 0) + c
            if s:
                shifted[e] = s
            elif e in shifted:
                del shifted[e]
        acc = shifted

    raw = {}
    for e, c in acc.items():
        if c:
            if c.denominator != 1:
                raise NonIntegralResultError(
                    f"non-integral coefficient {c} at exponents {e}; "
                    "degree bound upstream is too small")
            raw[e] = int(c)
    return Polynomial(_raw=raw)
