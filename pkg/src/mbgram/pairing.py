"""Diagram pairing: glue two connections and read off the curve monomial.

Gluing a diagram m1 to the mirror of a diagram m2 along the marked
boundary produces disjoint simple closed curves; the pairing value is the
product of one variable per curve:

    d  homotopically trivial curve
    z  essential curve avoiding both crosscaps
    x  curve through the m1 crosscap only
    y  curve through the m2 crosscap only
    w  curve through both crosscaps

The curves are recovered combinatorially from a multigraph on the 2n
boundary vertices whose edges are the chords of both diagrams plus, per
diagram, the antipodal pairing of its fixed points (fixed point i pairs
with i + |F|/2 in increasing-label indexing).  Every vertex carries
exactly one m1-edge and one m2-edge, so the components are disjoint
alternating cycles, one per curve.

A component touching fixed points of either diagram is classified by
which sides it touches (x / y / w).  A component made of chords alone is
either trivial (d) or winds once around the band (z); the two are told
apart by the signed sweep of the walk around the cycle.  Traversing an
arc tail-to-head adds (head - tail) mod 2n, head-to-tail subtracts it,
for chords of both diagrams alike; the total over a closed cycle is a
multiple of 2n, equal to 0 for a trivial curve and +/-2n for an
essential one.  Any other value is a hard internal error.  The walk
starts at the smallest component vertex that is the tail of an m1 chord
and first traverses that chord towards its head.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from mbgram.diagrams import Arc, Diagram
from mbgram.errors import (MalformedComponentError, SizeMismatchError,
                           UnclassifiableComponentError)
from mbgram.polynomial import Polynomial

CURVE_CLASSES = ("d", "x", "y", "w", "z")


def antipodal_pairs(fixed: tuple) -> list:
    """Pair fixed points antipodally: index i with i + |F|/2, labels increasing.

    For the usual two fixed points this is the single pair; for 2i fixed
    points it produces i pairs, each a curve through the crosscap.
    """
    k = len(fixed)
    if k % 2:
        raise ValueError(f"odd number of fixed points: {fixed}")
    ordered = sorted(fixed)
    half = k // 2
    return [(ordered[i], ordered[(i + half) % k]) for i in range(half)]


@dataclass(frozen=True)
class PairingGraph:
    """The gluing multigraph of one ordered diagram pair."""

    n2: int
    t_edges: tuple           # ((u, v, source), ...) source in {"m1", "m2"}
    ef1: tuple               # antipodal pairs among F(m1)
    ef2: tuple               # antipodal pairs among F(m2)
    fixed1: frozenset
    fixed2: frozenset
    _p1: dict = field(repr=False, hash=False, compare=False, default_factory=dict)
    _p2: dict = field(repr=False, hash=False, compare=False, default_factory=dict)
    _arc1: dict = field(repr=False, hash=False, compare=False, default_factory=dict)
    _arc2: dict = field(repr=False, hash=False, compare=False, default_factory=dict)

    def partner(self, v: int, side: int) -> int:
        table = self._p1 if side == 1 else self._p2
        try:
            return table[v]
        except KeyError:
            raise MalformedComponentError(
                f"vertex {v} has no m{side} edge") from None

    def arc_at(self, v: int, side: int) -> Arc | None:
        """The m-side chord incident to v, or None when v is a fixed point."""
        return (self._arc1 if side == 1 else self._arc2).get(v)


def build_pairing_graph(m1: Diagram, m2: Diagram) -> PairingGraph:
    """Assemble the gluing multigraph; diagrams must share a boundary size."""
    if m1.n != m2.n:
        raise SizeMismatchError(f"cannot pair n={m1.n} with n={m2.n}")
    n2 = 2 * m1.n
    p1: dict = {}
    p2: dict = {}
    arc1: dict = {}
    arc2: dict = {}
    t_edges = []
    for source, diagram, partners, arcs in (("m1", m1, p1, arc1), ("m2", m2, p2, arc2)):
        for arc in diagram.chords:
            partners[arc.tail] = arc.head
            partners[arc.head] = arc.tail
            arcs[arc.tail] = arc
            arcs[arc.head] = arc
            t_edges.append((arc.tail, arc.head, source))
    ef1 = tuple(antipodal_pairs(m1.fixed))
    ef2 = tuple(antipodal_pairs(m2.fixed))
    for u, v in ef1:
        p1[u] = v
        p1[v] = u
    for u, v in ef2:
        p2[u] = v
        p2[v] = u
    return PairingGraph(
        n2=n2,
        t_edges=tuple(t_edges),
        ef1=ef1,
        ef2=ef2,
        fixed1=m1.fixed_set(),
        fixed2=m2.fixed_set(),
        _p1=p1,
        _p2=p2,
        _arc1=arc1,
        _arc2=arc2,
    )


def components(g: PairingGraph) -> list:
    """Disjoint alternating cycles, as vertex tuples in traversal order.

    Each cycle starts at its minimum vertex, leaves along the m1 edge, and
    alternates m2/m1 edges until it closes.
    """
    seen = set()
    out = []
    for start in range(1, g.n2 + 1):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        v = g.partner(start, 1)
        side = 2
        while v != start:
            if v in seen:
                raise MalformedComponentError(
                    f"walk from {start} revisited {v} before closing")
            cycle.append(v)
            seen.add(v)
            v = g.partner(v, side)
            side = 3 - side
        if side != 1:
            # the closing edge must be an m2 edge; anything else means the
            # alternation broke (possible only for malformed inputs)
            raise MalformedComponentError(
                f"cycle through {start} closed on the wrong side")
        out.append(tuple(cycle))
    return out


@dataclass(frozen=True)
class WalkStep:
    source: str      # "m1" or "m2"
    arc: Arc
    start: int
    end: int
    sweep: int       # signed counterclockwise sweep contribution


@dataclass(frozen=True)
class WalkTrace:
    """Sweep bookkeeping for one fixed-point-free component."""

    vertices: tuple  # walk order, starting vertex first, closing implied
    steps: tuple
    psi: int


def component_walk(g: PairingGraph, component: tuple) -> WalkTrace:
    """Walk a fixed-point-free component and total up the signed sweeps."""
    comp = set(component)
    starts = [v for v in comp
              if (arc := g.arc_at(v, 1)) is not None and arc.tail == v]
    if not starts:
        raise MalformedComponentError(
            f"component {sorted(comp)} has no m1 chord tail to start from")
    start = min(starts)
    steps = []
    order = [start]
    v = start
    side = 1
    while True:
        arc = g.arc_at(v, side)
        u = g.partner(v, side)
        if arc is None:
            raise MalformedComponentError(
                f"component {sorted(comp)} is not fixed-point-free at {v}")
        length = (arc.head - arc.tail) % g.n2
        sweep = length if v == arc.tail else -length
        steps.append(WalkStep(source=f"m{side}", arc=arc, start=v, end=u, sweep=sweep))
        v = u
        side = 3 - side
        if v == start and side == 1:
            break
        order.append(v)
    return WalkTrace(vertices=tuple(order), steps=tuple(steps),
                     psi=sum(s.sweep for s in steps))


def classify_component(g: PairingGraph, component: tuple) -> str:
    """One curve class per component: x / y / w by fixed points, else d / z."""
    comp = set(component)
    touches1 = bool(comp & g.fixed1)
    touches2 = bool(comp & g.fixed2)
    if touches1 and touches2:
        return "w"
    if touches1:
        return "x"
    if touches2:
        return "y"
    psi = component_walk(g, component).psi
    if psi == 0:
        return "d"
    if psi == g.n2 or psi == -g.n2:
        return "z"
    raise UnclassifiableComponentError(
        f"component {sorted(comp)} swept {psi}, expected 0 or +/-{g.n2}")


def curve_profile(m1: Diagram, m2: Diagram) -> tuple:
    """Sorted tuple of curve classes, one per glued component."""
    g = build_pairing_graph(m1, m2)
    return tuple(sorted(classify_component(g, comp) for comp in components(g)))


def bilinear_form(m1: Diagram, m2: Diagram) -> Polynomial:
    """The pairing value: a single monomial, one variable per curve."""
    exps = {name: 0 for name in CURVE_CLASSES}
    for cls in curve_profile(m1, m2):
        exps[cls] += 1
    return Polynomial.monomial(1, exps)


def pair_trace(m1: Diagram, m2: Diagram) -> dict:
    """Full JSON-ready trace of one pairing, for the CLI."""
    g = build_pairing_graph(m1, m2)
    comps = []
    for comp in components(g):
        cls = classify_component(g, comp)
        entry = {"vertices": list(comp), "class": cls}
        if cls in ("d", "z"):
            walk = component_walk(g, comp)
            entry["psi"] = walk.psi
            entry["sweeps"] = [[s.source, s.start, s.end, s.sweep] for s in walk.steps]
        comps.append(entry)
    value = bilinear_form(m1, m2)
    return {
        "m1": m1.serialize(),
        "m2": m2.serialize(),
        "value": str(value),
        "value_poly": value.to_json_obj(),
        "t_edges": [[u, v, source] for u, v, source in g.t_edges],
        "ef1": [list(p) for p in g.ef1],
        "ef2": [list(p) for p in g.ef2],
        "components": comps,
    }
