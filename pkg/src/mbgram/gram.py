"""Gram matrices of diagram pairings, exact determinants, formula checks.

Three matrix variants over the canonical diagram bases:

    full   pairings over both strata together (zero- then one-crosscap)
    mbn1   pairings over the one-crosscap stratum only
    tilde  mbn1 with y = 0 and w = 1 substituted entrywise

Determinants are always exact.  Two backends with a crossover: fraction
free elimination directly over the polynomial ring for matrices up to
40x40 or with three or more active variables, and evaluation plus Newton
interpolation for larger matrices in few variables (the tilde family,
whose entries are powers of d).  The evaluation backend bottoms out in
exact integer determinants (see intdet) and both backends are asserted
equal wherever both are feasible.

The conjectured closed forms for the determinants are built from the
Chebyshev generators, either fully expanded or as (factor, exponent)
lists; products with tens of thousands of degrees are only ever compared
factorwise.  Verification outcomes are Reports: a formula mismatch is a
finding, never an exception.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Mapping, Sequence

from mbgram import intdet
from mbgram.chebyshev import cheb_S, cheb_T
from mbgram.diagrams import Stratum, basis_mb1, enumerate_stratum
from mbgram.errors import BoundExceededError, NonIntegralResultError
from mbgram.pairing import bilinear_form
from mbgram.polynomial import Polynomial, interpolate
from mbgram.reporting import Report
from mbgram.storage import cache_read, cache_write, resolve_cache_dir

GRAM_FORMAT = "mbgram.gram/1"
DET_FORMAT = "mbgram.det/1"

TILDE_SUBSTITUTION = {"y": 0, "w": 1}

BAREISS_MAX_SIZE = 40       # crossover: elimination up to here ...
BAREISS_MIN_VARS = 3        # ... or whenever this many variables are active
EXPAND_DEGREE_LIMIT = 1200  # refuse runaway closed-form expansions

WITNESS_TERM_LIMIT = 120    # serialize full polynomials only up to this size

DEFAULT_SEED = 20230917     # published default for randomized checks


class GramVariant(Enum):
    MB1_FULL = "full"
    MBN1 = "mbn1"
    MBN1_TILDE = "tilde"

    def size(self, n: int) -> int:
        if self is GramVariant.MB1_FULL:
            return comb(2 * n, n) + comb(2 * n, n - 1)
        return comb(2 * n, n - 1)

    def default_bound(self) -> int:
        return 4 if self is GramVariant.MB1_FULL else 5


class ConjectureId(Enum):
    C3_3 = "C3_3"   # tilde determinant as a product of (T_2k - 2) powers
    C3_4 = "C3_4"   # full-basis determinant, five variables
    C3_5 = "C3_5"   # tilde determinant via (d^2-4) and S_{k-1} powers
    C5_1 = "C5_1"   # whole-band determinant (builder only, not verified)


@dataclass(frozen=True)
class GramMatrix:
    """Square array of pairing monomials over an ordered diagram basis."""

    n: int
    variant: GramVariant
    basis: tuple
    entries: tuple  # tuple of row tuples of Polynomial

    @property
    def size(self) -> int:
        return len(self.basis)

    def rows(self) -> list:
        return [list(row) for row in self.entries]

    def active_variables(self) -> tuple:
        used = set()
        for row in self.entries:
            for entry in row:
                used.update(entry.variables_used())
        order = [v for v in ("d", "w", "x", "y", "z") if v in used]
        return tuple(order)

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant.value,
            "basis": [m.serialize() for m in self.basis],
            "entries": [[e.to_terms_obj() for e in row] for row in self.entries],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "GramMatrix":
        from mbgram.diagrams import parse_diagram

        basis = tuple(parse_diagram(text) for text in obj["basis"])
        entries = tuple(
            tuple(Polynomial.from_terms_obj(cell) for cell in row)
            for row in obj["entries"])
        return cls(n=int(obj["n"]), variant=GramVariant(obj["variant"]),
                   basis=basis, entries=entries)


def gram_basis(n: int, variant: GramVariant) -> list:
    if variant is GramVariant.MB1_FULL:
        return basis_mb1(n)
    return enumerate_stratum(n, Stratum.ONE_CROSSCAP)


def assemble_gram(n: int, variant: GramVariant, bound: int | None = None) -> GramMatrix:
    """Pairing matrix over the canonical basis; tilde substitutes y=0, w=1."""
    limit = bound if bound is not None else variant.default_bound()
    if n > limit:
        raise BoundExceededError(f"n={n} exceeds bound {limit} for {variant.value}")
    basis = gram_basis(n, variant)
    substitute = variant is GramVariant.MBN1_TILDE
    entries = []
    for m_i in basis:
        row = []
        for m_j in basis:
            value = bilinear_form(m_i, m_j)
            if substitute:
                value = value.substitute(TILDE_SUBSTITUTION)
            row.append(value)
        entries.append(tuple(row))
    return GramMatrix(n=n, variant=variant, basis=tuple(basis), entries=tuple(entries))


# -- determinant backends -----------------------------------------------------


def _matrix_rows(matrix) -> list:
    if isinstance(matrix, GramMatrix):
        return matrix.rows()
    return [list(row) for row in matrix]


def det_exact(matrix) -> Polynomial:
    """Fraction-free elimination over the polynomial ring.

    Zero pivots are repaired by a column permutation with sign tracking;
    interior divisions are exact by Sylvester's identity, so a failed
    division is a fatal internal error, not a condition to handle.
    """
    m = _matrix_rows(matrix)
    n = len(m)
    if n == 0:
        return Polynomial.one()
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(n):
            if isinstance(m[i][j], int):
                m[i][j] = Polynomial.integer(m[i][j])
    if n == 1:
        return m[0][0]
    sign = 1
    prev: Polynomial | None = None
    for k in range(n - 1):
        if m[k][k].is_zero():
            for j in range(k + 1, n):
                if not m[k][j].is_zero():
                    for row in m:
                        row[k], row[j] = row[j], row[k]
                    sign = -sign
                    break
            else:
                return Polynomial.zero()
        pivot = m[k][k]
        for i in range(k + 1, n):
            m_ik = m[i][k]
            for j in range(k + 1, n):
                numerator = pivot * m[i][j] - m_ik * m[k][j]
                if prev is None:
                    m[i][j] = numerator
                else:
                    quotient = numerator.divide_exact(prev)
                    if quotient is None:
                        raise RuntimeError(
                            "inexact interior division in fraction-free elimination")
                    m[i][j] = quotient
            m[i][k] = Polynomial.zero()
        prev = pivot
    result = m[n - 1][n - 1]
    return -result if sign < 0 else result


def _grid_points(count: int, var: str) -> list:
    """Symmetric integer abscissae; for d the values 0, +/-1 are excluded."""
    points = []
    t = 2 if var == "d" else 0
    while len(points) < count:
        points.append(t)
        if t > 0 and len(points) < count:
            points.append(-t)
        t += 1 if t else 1
    return points[:count]


def default_degree_bounds(rows: list, variables: Sequence[str]) -> dict:
    """Per-variable determinant degree bound: size x max entry degree."""
    size = len(rows)
    return {
        var: size * max((entry.degree_in(var) for row in rows for entry in row),
                        default=0)
        for var in variables
    }


_EVAL_STATE: dict = {}


def _eval_worker_init(rows_obj: list, var: str | None) -> None:
    _EVAL_STATE["rows"] = [[Polynomial.from_terms_obj(cell) for cell in row]
                           for row in rows_obj]
    _EVAL_STATE["var"] = var


def _eval_worker_point(t: int) -> int:
    rows = _EVAL_STATE["rows"]
    var = _EVAL_STATE["var"]
    evaluated = [[entry.eval_var(var, t).as_integer() for entry in row] for row in rows]
    return intdet.int_det(evaluated)


def _eval_worker_multipoint(point: Mapping[str, int]) -> int:
    rows = _EVAL_STATE["rows"]
    evaluated = [[entry.evaluate(point) for entry in row] for row in rows]
    return intdet.int_det(evaluated)


def _dets_at_points(gm: "GramMatrix", points: list, jobs: int) -> list:
    """Exact integer determinants of the matrix at several points.

    Worker processes only distribute the per-point work; the values, and
    therefore every downstream outcome, do not depend on the job count.
    """
    if jobs > 1 and gm.size >= 32 and len(points) > 1:
        rows_obj = [[entry.to_terms_obj() for entry in row] for row in gm.entries]
        with ProcessPoolExecutor(max_workers=jobs, initializer=_eval_worker_init,
                                 initargs=(rows_obj, None)) as pool:
            return list(pool.map(_eval_worker_multipoint, points))
    out = []
    for point in points:
        rows = [[entry.evaluate(point) for entry in row] for row in gm.entries]
        out.append(intdet.int_det(rows))
    return out


def _det_by_evaluation_once(rows: list, variables: Sequence[str],
                            bounds: Mapping[str, int], jobs: int) -> Polynomial:
    if not variables:
        ints = [[entry.as_integer() for entry in row] for row in rows]
        return Polynomial.integer(intdet.int_det(ints))
    var = variables[0]
    rest = variables[1:]
    points = _grid_points(bounds[var] + 1, var)
    if not rest and jobs > 1 and len(rows) >= 32 and len(points) >= 8:
        rows_obj = [[entry.to_terms_obj() for entry in row] for row in rows]
        with ProcessPoolExecutor(max_workers=jobs, initializer=_eval_worker_init,
                                 initargs=(rows_obj, var)) as pool:
            values = list(pool.map(_eval_worker_point, points, chunksize=4))
        samples = [(t, Polynomial.integer(v)) for t, v in zip(points, values)]
    else:
        samples = []
        for t in points:
            sub_rows = [[entry.eval_var(var, t) for entry in row] for row in rows]
            samples.append((t, _det_by_evaluation_once(sub_rows, rest, bounds, jobs)))
    return interpolate(var, samples)


def det_by_evaluation(matrix, variables: Sequence[str] | None = None,
                      bounds: Mapping[str, int] | None = None,
                      jobs: int = 1) -> Polynomial:
    """Determinant via evaluation grids and Newton interpolation.

    Designated variables are evaluated on symmetric integer grids of
    (bound + 1) points each, inner determinants recurse until the leaves
    are plain integer matrices, and the samples are interpolated back.
    A non-integral interpolation signals a too-small degree bound; it is
    retried once with doubled bounds, then treated as fatal.
    """
    rows = _matrix_rows(matrix)
    if any(len(row) != len(rows) for row in rows):
        raise ValueError("matrix must be square")
    rows = [[Polynomial.integer(e) if isinstance(e, int) else e for e in row]
            for row in rows]
    if variables is None:
        used = set()
        for row in rows:
            for entry in row:
                used.update(entry.variables_used())
        variables = [v for v in ("d", "w", "x", "y", "z") if v in used]
    variables = list(variables)
    if bounds is None:
        bounds = default_degree_bounds(rows, variables)
    else:
        bounds = dict(bounds)
        missing = [v for v in variables if v not in bounds]
        if missing:
            bounds.update(default_degree_bounds(rows, missing))
    try:
        return _det_by_evaluation_once(rows, variables, bounds, jobs)
    except NonIntegralResultError:
        doubled = {v: 2 * b for v, b in bounds.items()}
        return _det_by_evaluation_once(rows, variables, doubled, jobs)


def choose_backend(matrix) -> str:
    """Crossover rule between the two determinant backends."""
    rows = _matrix_rows(matrix)
    used = set()
    for row in rows:
        for entry in row:
            if isinstance(entry, Polynomial):
                used.update(entry.variables_used())
    if len(rows) <= BAREISS_MAX_SIZE or len(used) >= BAREISS_MIN_VARS:
        return "bareiss"
    return "interp"


def det_auto(matrix, jobs: int = 1) -> tuple:
    """(determinant, backend tag) using the crossover rule."""
    backend = choose_backend(matrix)
    if backend == "bareiss":
        return det_exact(matrix), backend
    return det_by_evaluation(matrix, jobs=jobs), backend


# -- cached assembly and determinants ------------------------------------------


def get_gram(n: int, variant: GramVariant, cache_dir=None,
             bound: int | None = None) -> GramMatrix:
    cache_dir = resolve_cache_dir(cache_dir)
    key = f"gram_{variant.value}_{n}"
    payload = cache_read(cache_dir, key, GRAM_FORMAT)
    if payload is not None:
        gm = GramMatrix.from_json_obj(payload)
        if gm.n == n and gm.variant is variant and gm.size == variant.size(n):
            return gm
    gm = assemble_gram(n, variant, bound=bound)
    cache_write(cache_dir, key, GRAM_FORMAT, gm.to_json_obj())
    return gm


def get_det(n: int, variant: GramVariant, cache_dir=None, jobs: int = 1,
            backend: str = "auto") -> tuple:
    """(determinant, provenance) with disk caching."""
    cache_dir = resolve_cache_dir(cache_dir)
    key = f"det_{variant.value}_{n}"
    payload = cache_read(cache_dir, key, DET_FORMAT)
    if payload is not None and payload.get("n") == n and (
            backend == "auto" or payload.get("backend") == backend):
        poly = Polynomial.from_json_obj(payload["det"])
        return poly, {k: payload[k] for k in ("backend", "elapsed_s") if k in payload}
    gm = get_gram(n, variant, cache_dir=cache_dir)
    started = time.perf_counter()
    if backend == "auto":
        det, used_backend = det_auto(gm, jobs=jobs)
    elif backend == "bareiss":
        det, used_backend = det_exact(gm), "bareiss"
    elif backend == "interp":
        det, used_backend = det_by_evaluation(gm, jobs=jobs), "interp"
    else:
        raise ValueError(f"unknown backend {backend!r}")
    elapsed = time.perf_counter() - started
    cache_write(cache_dir, key, DET_FORMAT, {
        "n": n,
        "variant": variant.value,
        "backend": used_backend,
        "elapsed_s": round(elapsed, 3),
        "seed": None,  # exact backends only; randomized checks cache nothing
        "det": det.to_json_obj(),
    })
    return det, {"backend": used_backend, "elapsed_s": elapsed}


# -- conjectured closed forms ---------------------------------------------------


def _tilde_factors_via_t(n: int) -> list:
    return [(cheb_T(2 * k) - 2, comb(2 * n, n - k)) for k in range(2, n + 1)]


def _d2m4() -> Polynomial:
    d = Polynomial.variable("d")
    return d * d - 4


def _tilde_factors_via_s(n: int) -> list:
    out = []
    for k in range(2, n + 1):
        e = comb(2 * n, n - k)
        out.append((_d2m4(), e))
        out.append((cheb_S(k - 1), 2 * e))
    return out


def _full_basis_factors(n: int) -> list:
    d = Polynomial.variable("d")
    w = Polynomial.variable("w")
    x = Polynomial.variable("x")
    y = Polynomial.variable("y")
    z = Polynomial.variable("z")
    head = (d - z) * ((d + z) * w - 2 * x * y)
    out = [(head, comb(2 * n, n - 1))]
    for k in range(2, n + 1):
        e = comb(2 * n, n - k)
        t = cheb_T(k)
        out.append((t * t - z * z, e))
    out.extend(_tilde_factors_via_s(n))
    return out


def _whole_band_factors(n: int) -> list:
    """Closed form for the whole-band determinant (builder only).

    The trailing blocks are read as prod_{k=i+1}^{n} of the same
    (d^2-4)^C S_{k-1}^{2C} pattern as the tilde formula, one block per
    crosscap-curve count i = 1..n.
    """
    d = Polynomial.variable("d")
    w = Polynomial.variable("w")
    x = Polynomial.variable("x")
    z = Polynomial.variable("z")
    y = Polynomial.variable("y")
    out = []
    for k in range(1, n + 1):
        e = comb(2 * n, n - k)
        t_d = cheb_T(k)
        t_w = t_d.substitute({"d": w})
        sign = -1 if k % 2 else 1
        out.append((t_d + sign * z, e))
        if k % 2:
            out.append(((t_d - sign * z) * t_w - 2 * x * y, e))
        else:
            out.append(((t_d - sign * z) * t_w - 2 * (2 - z), e))
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            e = comb(2 * n, n - k)
            out.append((_d2m4(), e))
            out.append((cheb_S(k - 1), 2 * e))
    return out


_FACTOR_BUILDERS: dict = {
    ConjectureId.C3_3: (_tilde_factors_via_t, 2),
    ConjectureId.C3_4: (_full_basis_factors, 1),
    ConjectureId.C3_5: (_tilde_factors_via_s, 2),
    ConjectureId.C5_1: (_whole_band_factors, 1),
}


def conjecture_factors(conjecture: ConjectureId, n: int) -> list:
    """Closed form as a list of (polynomial factor, exponent) pairs."""
    builder, n_min = _FACTOR_BUILDERS[conjecture]
    if n < n_min:
        raise ValueError(f"{conjecture.value} needs n >= {n_min}, got {n}")
    return builder(n)


def conjecture_formula(conjecture: ConjectureId, n: int) -> Polynomial:
    """Closed form expanded to a canonical polynomial.

    Guarded by a degree limit: the exponents grow binomially with n and a
    fully expanded product quickly stops being representable; factorwise
    comparison (conjecture_factors) covers those ranges.
    """
    factors = conjecture_factors(conjecture, n)
    degree = sum(f.total_degree() * e for f, e in factors)
    if degree > EXPAND_DEGREE_LIMIT:
        raise BoundExceededError(
            f"expanded {conjecture.value} at n={n} has degree {degree}; "
            f"limit {EXPAND_DEGREE_LIMIT} (compare factors instead)")
    result = Polynomial.one()
    for factor, exponent in factors:
        result = result * factor ** exponent
    return result


def formula_value_at(conjecture: ConjectureId, n: int, point: Mapping[str, int]) -> int:
    """Exact integer value of the closed form at a point, without expanding."""
    value = 1
    for factor, exponent in conjecture_factors(conjecture, n):
        value *= factor.evaluate(point) ** exponent
    return value


# -- verification drivers ---------------------------------------------------------


def _witness_poly(p: Polynomial) -> dict:
    if p.num_terms() <= WITNESS_TERM_LIMIT:
        return p.to_json_obj()
    lead_exps, lead_coef = p.leading_term()
    return {
        "summary": True,
        "num_terms": p.num_terms(),
        "total_degree": p.total_degree(),
        "leading": [lead_coef, *lead_exps],
    }


def _conjecture_variant(conjecture: ConjectureId) -> GramVariant:
    if conjecture is ConjectureId.C3_4:
        return GramVariant.MB1_FULL
    return GramVariant.MBN1_TILDE


def total_degree_bound(gm: GramMatrix) -> int:
    """Upper bound on the total degree of det(G): rowwise max entry degrees."""
    return sum(max((entry.total_degree() for entry in row if not entry.is_zero()),
                   default=0) for row in gm.entries)


def verify_conjecture(conjecture: ConjectureId, n: int, method: str = "exact",
                      seed: int | None = None, points: int = 20,
                      jobs: int = 1, cache_dir=None) -> Report:
    """Compare a Gram determinant against its conjectured closed form.

    method="exact": both sides as canonical polynomials, structural
    equality.  method="randomized": equality of exact integer values at
    `points` seeded sample points whose coordinates exceed the total
    degree bound; the report states the resulting failure bound.  A
    mismatch is a first-class finding (FAIL with witness), not an error.
    """
    started = time.perf_counter()
    if conjecture is ConjectureId.C5_1:
        return Report(
            claim=conjecture.value, tag="conjecture", status="SKIPPED",
            params={"n": n},
            notes=["builder only: verifying the whole-band determinant needs "
                   "pairings of diagrams with several crosscap curves"],
            duration_s=time.perf_counter() - started)
    variant = _conjecture_variant(conjecture)
    if method == "exact":
        det, provenance = get_det(n, variant, cache_dir=cache_dir, jobs=jobs)
        formula = conjecture_formula(conjecture, n)
        status = "PASS" if det == formula else "FAIL"
        witness = None
        if status == "FAIL":
            witness = {"determinant": _witness_poly(det),
                       "formula": _witness_poly(formula),
                       "difference": _witness_poly(det - formula)}
        return Report(
            claim=conjecture.value, tag="conjecture", status=status,
            params={"n": n, "variant": variant.value, "size": variant.size(n),
                    "method": "exact"},
            witness=witness, backend=provenance.get("backend"),
            duration_s=time.perf_counter() - started)
    if method != "randomized":
        raise ValueError(f"unknown method {method!r}")

    gm = get_gram(n, variant, cache_dir=cache_dir)
    degree_bound = total_degree_bound(gm)
    if seed is None:
        seed = DEFAULT_SEED
    rng = random.Random(seed)
    # Coordinates must exceed the degree bound; beyond that, keep them small
    # enough that evaluated entries stay within int64 (fast residue path in
    # the integer determinant) while the sample space still beats 2^-40.
    entry_degree = max((e.total_degree() for row in gm.entries for e in row
                        if not e.is_zero()), default=1)
    int64_cap = int(2 ** (60 / max(entry_degree, 1))) - degree_bound - 2
    # the lower clamp keeps the sample space large; if it forces values past
    # the int64 range the determinant core just falls back to big integers
    magnitude = max(min(2 ** 20, int64_cap), 8 * degree_bound)
    sample_size = 2 * magnitude  # signed magnitudes above the degree bound
    failure_bound = (degree_bound / sample_size) ** points
    variables = ("d", "w", "x", "y", "z")
    sample = []
    for _ in range(points):
        point = {}
        for var in variables:
            mag = rng.randint(degree_bound + 1, degree_bound + magnitude)
            point[var] = mag if rng.random() < 0.5 else -mag
        sample.append(point)
    det_values = _dets_at_points(gm, sample, jobs)
    mismatch = None
    for point, det_value in zip(sample, det_values):
        formula_value = formula_value_at(conjecture, n, point)
        if det_value != formula_value:
            mismatch = (point, det_value, formula_value)
            break
    if mismatch is None:
        return Report(
            claim=conjecture.value, tag="conjecture", status="PASS",
            params={"n": n, "variant": variant.value, "size": gm.size,
                    "method": "randomized", "points": points,
                    "degree_bound": degree_bound,
                    "failure_bound": failure_bound},
            backend="randomized", seed=seed,
            duration_s=time.perf_counter() - started)
    point, det_value, formula_value = mismatch
    return Report(
        claim=conjecture.value, tag="conjecture", status="FAIL",
        params={"n": n, "variant": variant.value, "method": "randomized"},
        witness={"point": point, "determinant_value": str(det_value),
                 "formula_value": str(formula_value)},
        backend="randomized", seed=seed,
        duration_s=time.perf_counter() - started)


def verify_theorem_3_6(n: int, jobs: int = 1, cache_dir=None) -> Report:
    """Exact divisibility of the tilde determinant by d^(2 C(2n, n-2)).

    S_1 = d, so the claimed divisor S_1^{2k} with k = C(2n, n-2) is the
    pure power d^{2k}; the check divides exactly and stores the quotient.
    """
    started = time.perf_counter()
    if n < 2:
        raise ValueError(f"divisibility check needs n >= 2, got {n}")
    det, provenance = get_det(n, GramVariant.MBN1_TILDE, cache_dir=cache_dir, jobs=jobs)
    k = comb(2 * n, n - 2)
    divisor = Polynomial.monomial(1, {"d": 2 * k})
    quotient = det.divide_exact(divisor)
    if quotient is not None:
        return Report(
            claim="Thm3_6", tag="divisibility", status="PASS",
            params={"n": n, "divisor_exponent": 2 * k},
            witness={"quotient": _witness_poly(quotient)},
            backend=provenance.get("backend"),
            duration_s=time.perf_counter() - started)
    return Report(
        claim="Thm3_6", tag="divisibility", status="FAIL",
        params={"n": n, "divisor_exponent": 2 * k},
        witness={"determinant": _witness_poly(det)},
        backend=provenance.get("backend"),
        duration_s=time.perf_counter() - started)


def verify_formula_identity(n_max: int = 8) -> Report:
    """Structural equality of the two tilde closed forms, factor by factor.

    For each n the two factor lists pair up per index k; equality of the
    paired factors (as expanded small polynomials) with equal exponents
    implies equality of the full products, which themselves would have
    degree tens of thousands at n = 8.
    """
    started = time.perf_counter()
    for n in range(2, n_max + 1):
        via_t = conjecture_factors(ConjectureId.C3_3, n)
        via_s = conjecture_factors(ConjectureId.C3_5, n)
        for idx, (t_factor, t_exp) in enumerate(via_t):
            d2m4, e1 = via_s[2 * idx]
            s_factor, e2 = via_s[2 * idx + 1]
            combined = d2m4 * s_factor * s_factor
            if not (t_exp == e1 and 2 * e1 == e2 and combined == t_factor):
                return Report(
                    claim="C3_3==C3_5", tag="formula-identity", status="FAIL",
                    params={"at": [n, idx]},
                    witness={"lhs": t_factor.to_json_obj(),
                             "rhs": combined.to_json_obj(),
                             "exponents": [t_exp, e1, e2]},
                    duration_s=time.perf_counter() - started)
    return Report(
        claim="C3_3==C3_5", tag="formula-identity", status="PASS",
        params={"n_range": [2, n_max], "comparison": "factorwise"},
        duration_s=time.perf_counter() - started)


# -- small fixtures ---------------------------------------------------------------


def class_matrix_4x4(u) -> list:
    """Pairing pattern of four connections differing only in two arcs.

    Rows and columns index the four ways of attaching two arcs to four
    shared fixed points (swapping which arc meets the crosscap); all
    other curves contribute the common monomial u.
    """
    u = Polynomial.integer(u) if isinstance(u, int) else u
    d = Polynomial.variable("d")
    zero = Polynomial.zero()
    du = d * u
    return [
        [du, zero, u, u],
        [zero, du, u, u],
        [u, u, du, zero],
        [u, u, zero, du],
    ]


def equal_up_to_simultaneous_permutation(a: list, b: list) -> bool:
    """True iff P a P^T == b for some permutation P (small sizes only)."""
    import itertools

    n = len(a)
    if len(b) != n:
        return False
    for perm in itertools.permutations(range(n)):
        if all(a[perm[i]][perm[j]] == b[i][j] for i in range(n) for j in range(n)):
            return True
    return False
