"""Crossingless connections on the Mobius band, in involutive notation.

A diagram on 2n marked boundary points (labelled 1..2n counterclockwise)
consists of oriented chords and fixed points:

  * a chord (t h) is an arc from t to h travelling counterclockwise
    around the internal crosscap, i.e. it sweeps the boundary interval
    from t to h and cuts the vertices strictly inside that interval off
    from the crosscap;
  * a fixed point (f) is a vertex connected to the crosscap by an arc.

Orientation matters: (a b) and (b a) are different arcs (they pass on
opposite sides of the crosscap), which is why a single unordered chord
supports up to two diagrams.  Text form lists chords by increasing tail,
then fixed points increasing, e.g. "(2 5)(3 4)(1)(6)".

Interval arithmetic is cyclic with positions measured from a base vertex:
pos_b(v) = (v - b) mod 2n.  Two arcs can be drawn disjointly in the
annulus iff their closed counterclockwise intervals are nested or
disjoint; anything else crosses.

The two strata enumerated here are the diagrams with no curve through
the crosscap (no fixed points, count C(2n, n)) and with exactly one
(two fixed points, count C(2n, n-1)).  Diagrams with more fixed points
can still be represented, parsed and paired; they are just never
enumerated.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Iterable, Iterator, NamedTuple, Sequence

from mbgram.errors import BoundExceededError, ParseError, SharedEndpointError

ENUMERATION_BOUND = 6


class Arc(NamedTuple):
    """Oriented chord: counterclockwise from tail to head."""

    tail: int
    head: int


def _pos(v: int, base: int, n2: int) -> int:
    return (v - base) % n2


def _nested_in(a: Arc, b: Arc, n2: int) -> bool:
    # ccw interval of a contained in ccw interval of b
    pd = _pos(b.head, b.tail, n2)
    pa = _pos(a.tail, b.tail, n2)
    pb = _pos(a.head, b.tail, n2)
    return 0 < pa < pb < pd


def _disjoint_after(a: Arc, b: Arc, n2: int) -> bool:
    # ccw interval of a sits entirely between b's head and the wrap to b's tail
    pd = _pos(b.head, b.tail, n2)
    pa = _pos(a.tail, b.tail, n2)
    pb = _pos(a.head, b.tail, n2)
    return pd < pa < pb


def arcs_cross(a: Arc, b: Arc, n2: int) -> bool:
    """True iff the two oriented arcs cannot be drawn disjointly.

    Non-crossing means one counterclockwise interval is contained in the
    other or the intervals are disjoint.  The predicate is orientation
    sensitive: e.g. (2 1) and (4 3) on four points wind around the
    crosscap in opposite directions and always intersect, even though the
    underlying vertex pairs do not interleave.
    """
    if len({a.tail, a.head, b.tail, b.head}) != 4:
        raise SharedEndpointError(f"arcs {a} and {b} share an endpoint")
    return not (
        _nested_in(a, b, n2)
        or _nested_in(b, a, n2)
        or _disjoint_after(a, b, n2)
        or _disjoint_after(b, a, n2)
    )


def fixed_point_blocked(a: Arc, f: int, n2: int) -> bool:
    """True iff the chord separates fixed point f from the crosscap.

    That happens exactly when f lies strictly inside the counterclockwise
    interval (tail, head) swept by the arc.
    """
    if f in (a.tail, a.head):
        raise SharedEndpointError(f"fixed point {f} is an endpoint of {a}")
    return 0 < _pos(f, a.tail, n2) < _pos(a.head, a.tail, n2)


class Stratum(Enum):
    """Diagram families by number of curves through the crosscap."""

    ZERO_CROSSCAP = "zero"
    ONE_CROSSCAP = "one"

    def expected_count(self, n: int) -> int:
        if self is Stratum.ZERO_CROSSCAP:
            return comb(2 * n, n)
        return comb(2 * n, n - 1)

    def fixed_count(self) -> int:
        return 0 if self is Stratum.ZERO_CROSSCAP else 2


@dataclass(frozen=True)
class Diagram:
    """One crossingless connection; immutable value object.

    chords are stored sorted by tail and fixed points sorted increasing,
    so equal diagrams compare and hash equal.
    """

    n: int
    chords: tuple
    fixed: tuple

    @classmethod
    def build(cls, n: int, chords: Iterable[Sequence[int]], fixed: Iterable[int]) -> "Diagram":
        arcs = tuple(sorted((Arc(int(t), int(h)) for t, h in chords), key=lambda a: a.tail))
        return cls(n=n, chords=arcs, fixed=tuple(sorted(int(f) for f in fixed)))

    @property
    def boundary_size(self) -> int:
        return 2 * self.n

    def fixed_set(self) -> frozenset:
        return frozenset(self.fixed)

    def serialize(self) -> str:
        parts = [f"({a.tail} {a.head})" for a in self.chords]
        parts += [f"({f})" for f in self.fixed]
        return "".join(parts)

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "chords": [[a.tail, a.head] for a in self.chords],
            "fixed": list(self.fixed),
        }

    @classmethod
    def from_json_obj(cls, obj) -> "Diagram":
        return cls.build(int(obj["n"]), obj.get("chords", []), obj.get("fixed", []))

    def __str__(self) -> str:
        return self.serialize()


_TOKEN_RE = re.compile(r"\(\s*(\d+)(?:\s+(\d+))?\s*\)|\s+|(.)")


def parse_diagram(text: str) -> Diagram:
    """Parse involutive notation like "(2 5)(3 4)(1)(6)".

    The labels must partition 1..2n exactly; n is inferred from the label
    count.  Raises ParseError with the offending position otherwise.
    """
    chords = []
    fixed = []
    seen = {}
    for match in _TOKEN_RE.finditer(text):
        if match.group(3) is not None:
            raise ParseError(f"unexpected character {match.group(3)!r}", match.start(3))
        if match.group(1) is None:
            continue  # whitespace between groups
        a = int(match.group(1))
        b = match.group(2)
        for label in ((a,) if b is None else (a, int(b))):
            if label in seen:
                raise ParseError(f"label {label} appears twice", match.start())
            seen[label] = True
        if b is None:
            fixed.append(a)
        else:
            b = int(b)
            if a == b:
                raise ParseError(f"chord ({a} {b}) repeats a label", match.start())
            chords.append((a, b))
    if not seen:
        raise ParseError("empty diagram", 0)
    n2 = len(seen)
    if n2 % 2:
        raise ParseError(f"odd number of labels ({n2})", len(text) - 1)
    if set(seen) != set(range(1, n2 + 1)):
        missing = min(set(range(1, n2 + 1)) - set(seen), default=max(seen))
        raise ParseError(f"labels must cover 1..{n2} exactly (check {missing})",
                         len(text) - 1)
    return Diagram.build(n2 // 2, chords, fixed)


def validate_diagram(m: Diagram, stratum: Stratum | None = None) -> list:
    """Return the list of violations (empty when the diagram is valid).

    Checks the vertex partition, pairwise non-crossing of chords, that no
    chord cuts a fixed point off from the crosscap, an even number of
    fixed points, and optionally membership in a stratum.
    """
    violations = []
    n2 = 2 * m.n
    if m.n < 1:
        return [f"n must be positive, got {m.n}"]
    counts: dict = {}
    for a in m.chords:
        if a.tail == a.head:
            violations.append(f"chord {a} repeats a label")
        for v in (a.tail, a.head):
            counts[v] = counts.get(v, 0) + 1
    for f in m.fixed:
        counts[f] = counts.get(f, 0) + 1
    for v, c in sorted(counts.items()):
        if not 1 <= v <= n2:
            violations.append(f"label {v} outside 1..{n2}")
        elif c > 1:
            violations.append(f"label {v} used {c} times")
    missing = sorted(set(range(1, n2 + 1)) - set(counts))
    if missing:
        violations.append(f"labels {missing} uncovered")
    if violations:
        return violations

    for a, b in itertools.combinations(m.chords, 2):
        if arcs_cross(a, b, n2):
            violations.append(f"chords {a} and {b} cross")
    for a in m.chords:
        for f in m.fixed:
            if fixed_point_blocked(a, f, n2):
                violations.append(f"chord {a} blocks fixed point {f}")
    if len(m.fixed) % 2:
        violations.append(f"odd number of fixed points ({len(m.fixed)})")
    if stratum is not None and len(m.fixed) != stratum.fixed_count():
        violations.append(
            f"stratum {stratum.value} needs {stratum.fixed_count()} fixed points, "
            f"got {len(m.fixed)}")
    return violations


def _arc_systems(free: tuple, fixed: tuple, placed: list, n2: int) -> Iterator[tuple]:
    """Yield all non-crossing oriented arc systems covering `free`.

    Backtracking on the smallest uncovered vertex; every tentative arc is
    filtered against the placed arcs and the fixed points immediately, so
    the search only ever walks valid prefixes.
    """
    if not free:
        yield tuple(placed)
        return
    v = free[0]
    rest = free[1:]
    for i, u in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for arc in (Arc(v, u), Arc(u, v)):
            if any(fixed_point_blocked(arc, f, n2) for f in fixed):
                continue
            if any(arcs_cross(arc, other, n2) for other in placed):
                continue
            placed.append(arc)
            yield from _arc_systems(remaining, fixed, placed, n2)
            placed.pop()


def enumerate_stratum(n: int, stratum: Stratum,
                      bound: int = ENUMERATION_BOUND) -> list:
    """All diagrams of one stratum, in canonical order.

    Canonical order is lexicographic on the serialized text.  The result
    size must equal C(2n, n) (zero-crosscap) or C(2n, n-1) (one-crosscap);
    the enumeration is exhaustive generation filtered by the crossing and
    blocking predicates, and the test suite certifies the counts.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > bound:
        raise BoundExceededError(f"n={n} exceeds enumeration bound {bound}")
    n2 = 2 * n
    vertices = tuple(range(1, n2 + 1))
    out = []
    if stratum is Stratum.ZERO_CROSSCAP:
        fixed_choices: Iterable[tuple] = [()]
    else:
        fixed_choices = itertools.combinations(vertices, 2)
    for fixed in fixed_choices:
        free = tuple(v for v in vertices if v not in fixed)
        for arcs in _arc_systems(free, fixed, [], n2):
            out.append(Diagram(n=n, chords=tuple(sorted(arcs, key=lambda a: a.tail)),
                               fixed=fixed))
    out.sort(key=lambda m: m.serialize())
    return out


def basis_mb1(n: int, bound: int = ENUMERATION_BOUND) -> list:
    """Canonical joint basis: zero-crosscap diagrams first, then one-crosscap."""
    return (enumerate_stratum(n, Stratum.ZERO_CROSSCAP, bound=bound)
            + enumerate_stratum(n, Stratum.ONE_CROSSCAP, bound=bound))
