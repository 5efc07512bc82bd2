"""Points of an orthoscheme complex and piecewise-linear paths through it.

A point is a convex combination of poset elements whose support is a chain.
Distances between two points sharing a simplex depend only on ranks: writing
sx(j) for the total coefficient mass of x at height >= j above the lowest
support element, the squared distance is the sum of (sx(j) - sy(j))^2 over
levels j.  Everything is computed in exact rational arithmetic; floats appear
only in reported lengths.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import (
    InvalidPoint,
    InvalidStructure,
    JoinUndefined,
    NotCommonSimplex,
)
from .poset import GradedPoset, Pip


def as_fraction(value) -> Fraction:
    """Coerce ints, 'num/den' strings and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InvalidPoint(f"not a rational: {value!r}") from None
    if isinstance(value, float):
        if value != int(value):
            raise InvalidPoint(
                f"refusing to guess a rational for float {value!r}; pass 'num/den'"
            )
        return Fraction(int(value))
    raise InvalidPoint(f"not a rational: {value!r}")


def fraction_str(f: Fraction) -> str:
    return str(f)


class Point:
    """Formal convex combination of elements; zero coefficients are dropped."""

    __slots__ = ("_items",)

    def __init__(self, coeffs):
        acc: dict[str, Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for e, v in items:
            f = as_fraction(v)
            if f < 0:
                raise InvalidPoint(f"negative coefficient {f} at {e!r}")
            if f:
                key = str(e)
                acc[key] = acc.get(key, Fraction(0)) + f
        self._items = tuple(sorted(acc.items()))

    @classmethod
    def vertex(cls, e) -> "Point":
        return cls({str(e): Fraction(1)})

    @property
    def coeffs(self) -> dict:
        return dict(self._items)

    @property
    def support(self) -> tuple:
        return tuple(e for e, _ in self._items)

    def coeff(self, e) -> Fraction:
        for k, v in self._items:
            if k == e:
                return v
        return Fraction(0)

    def total(self) -> Fraction:
        return sum((v for _, v in self._items), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, Point) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        inside = ", ".join(f"{e}: {v}" for e, v in self._items)
        return f"Point({{{inside}}})"


def check_point(poset: GradedPoset, x: Point) -> list:
    """Validate a point against a host; returns its support sorted by rank."""
    if x.total() != 1:
        raise InvalidPoint(f"coefficients sum to {x.total()}, not 1")
    supp = []
    for e, _ in x._items:
        if e not in poset:
            raise InvalidPoint(f"support element {e!r} is not in the poset")
        supp.append(e)
    supp.sort(key=lambda e: (poset.rank_of(e), e))
    for a, b in zip(supp, supp[1:]):
        if not poset.leq(a, b):
            raise InvalidPoint(f"support is not a chain: {a!r} vs {b!r}")
    return supp


def tau(poset: GradedPoset, x: Point) -> str:
    """The top element of the point's support chain."""
    supp = check_point(poset, x)
    return supp[-1]


def convex_combo(t: Fraction, x: Point, y: Point) -> Point:
    t = as_fraction(t)
    acc: dict[str, Fraction] = {}
    for e, v in x._items:
        acc[e] = acc.get(e, Fraction(0)) + (1 - t) * v
    for e, v in y._items:
        acc[e] = acc.get(e, Fraction(0)) + t * v
    return Point(acc)


def _chain_support_union(poset: GradedPoset, x: Point, y: Point) -> list:
    supp = sorted(
        set(x.support) | set(y.support),
        key=lambda e: (poset.rank_of(e), e),
    )
    for a, b in zip(supp, supp[1:]):
        if not poset.leq(a, b):
            raise NotCommonSimplex(
                f"supports do not lie on one chain: {a!r} vs {b!r}"
            )
    return supp


def sq_simplex_distance(poset: GradedPoset, x: Point, y: Point) -> Fraction:
    """Exact squared distance between two points of a common simplex."""
    supp = _chain_support_union(poset, x, y)
    if not supp:
        return Fraction(0)
    base = poset.rank_of(supp[0])
    total = Fraction(0)
    cum = Fraction(0)
    prev_h = None
    for e in reversed(supp):
        h = poset.rank_of(e) - base
        if prev_h is not None and prev_h > h:
            total += (prev_h - h) * cum * cum
        cum += x.coeff(e) - y.coeff(e)
        prev_h = h
    # the lowest support element sits at height 0, so all levels are covered
    return total


def simplex_distance(poset: GradedPoset, x: Point, y: Point) -> float:
    """Distance between two points sharing a simplex."""
    check_point(poset, x)
    check_point(poset, y)
    return math.sqrt(float(sq_simplex_distance(poset, x, y)))


def point_lattice_ops(poset: GradedPoset, a: str, x: Point, op: str):
    """Coefficientwise meet/join of a point with an element, or its top.

    'meet' sends each support element e to e∧a, 'join' to e∨a (raising
    JoinUndefined when some join is missing), 'tau' returns the support top.
    """
    if op == "tau":
        return tau(poset, x)
    check_point(poset, x)
    acc: dict[str, Fraction] = {}
    for e, v in x._items:
        if op == "meet":
            m = poset.meet(e, a)
            if m is None:
                raise InvalidStructure(f"meet of {e!r} and {a!r} does not exist")
        elif op == "join":
            m = poset.join(e, a)
            if m is None:
                raise JoinUndefined(f"join of {e!r} and {a!r} does not exist")
        else:
            raise ValueError(f"unknown point op {op!r}")
        acc[m] = acc.get(m, Fraction(0)) + v
    return Point(acc)


def point_meet(poset, x: Point, a: str) -> Point:
    return point_lattice_ops(poset, a, x, "meet")


def point_join(poset, x: Point, a: str) -> Point:
    return point_lattice_ops(poset, a, x, "join")


class PolyPath:
    """A piecewise-linear path given by (time, point) breakpoints.

    Times are strictly increasing rationals from 0 to 1 and consecutive
    breakpoints must share a simplex, so linear interpolation of coefficients
    between them is geodesic within one cell.
    """

    def __init__(self, breakpoints):
        bps = []
        for t, p in breakpoints:
            bps.append((as_fraction(t), p))
        if len(bps) < 2:
            raise InvalidStructure("a path needs at least two breakpoints")
        if bps[0][0] != 0 or bps[-1][0] != 1:
            raise InvalidStructure("path must be parametrized over [0, 1]")
        for (t0, _), (t1, _) in zip(bps, bps[1:]):
            if not t0 < t1:
                raise InvalidStructure("breakpoint times must strictly increase")
        self.breakpoints = tuple(bps)

    @property
    def start(self) -> Point:
        return self.breakpoints[0][1]

    @property
    def end(self) -> Point:
        return self.breakpoints[-1][1]

    def validate(self, poset: GradedPoset) -> "PolyPath":
        for _, p in self.breakpoints:
            check_point(poset, p)
        for (_, p), (_, q) in zip(self.breakpoints, self.breakpoints[1:]):
            _chain_support_union(poset, p, q)
        return self

    def point_at(self, t) -> Point:
        t = as_fraction(t)
        if t < 0 or t > 1:
            raise InvalidStructure(f"time {t} outside [0, 1]")
        bps = self.breakpoints
        lo, hi = 0, len(bps) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if bps[mid][0] <= t:
                lo = mid
            else:
                hi = mid
        t0, p0 = bps[lo]
        t1, p1 = bps[hi]
        if t == t0:
            return p0
        if t == t1:
            return p1
        return convex_combo((t - t0) / (t1 - t0), p0, p1)

    def length(self, poset: GradedPoset) -> float:
        segs = [
            math.sqrt(float(sq_simplex_distance(poset, p, q)))
            for (_, p), (_, q) in zip(self.breakpoints, self.breakpoints[1:])
        ]
        return math.fsum(segs)


def path_length(poset: GradedPoset, path: PolyPath) -> float:
    """Validate a path against its host and return its length."""
    path.validate(poset)
    return path.length(poset)


# -- vertex (cube) coordinates over a pip ----------------------------------


def check_b_point(pip: Pip, coords: dict) -> dict:
    """Validate vertex coordinates of a point in the cube complex of a pip.

    Coordinates live in [0, 1], respect the vertex order downward (smaller
    vertices carry at least the mass of larger ones) and every level set
    must be a stable ideal.
    """
    clean = {}
    for v, val in coords.items():
        f = as_fraction(val)
        if v not in pip.index:
            raise InvalidPoint(f"unknown vertex {v!r}")
        if f < 0 or f > 1:
            raise InvalidPoint(f"coordinate {f} at {v!r} outside [0, 1]")
        if f:
            clean[str(v)] = f
    for u, v in pip.order:
        fu = clean.get(u, Fraction(0))
        fv = clean.get(v, Fraction(0))
        if fu < fv:
            raise InvalidPoint(
                f"coordinates must not increase upward: {u!r} carries {fu} < {fv} at {v!r}"
            )
    for _, level in level_decomposition(clean):
        mask = pip.mask_of(level)
        if not pip.is_ideal_mask(mask):
            raise InvalidPoint(f"level set {sorted(level)} is not an ideal")
        if not pip.is_stable_mask(mask):
            raise InvalidPoint(f"level set {sorted(level)} is not stable")
    return clean


def level_decomposition(coords: dict) -> list:
    """Threshold sets of a coordinate vector, largest value first.

    Returns (value, vertices-with-coordinate->=-value) pairs for each distinct
    positive value.
    """
    vals = sorted({v for v in coords.values() if v > 0}, reverse=True)
    out = []
    seen: set = set()
    for val in vals:
        seen = {k for k, v in coords.items() if v >= val}
        out.append((val, frozenset(seen)))
    return out


def b_coordinates(ideal_poset: GradedPoset, x: Point) -> dict:
    """Vertex coordinates of a chain-form point over a stable-ideal poset.

    The host must carry `ideal_sets` (as produced by stable_ideals); the
    coordinate of a vertex is the total mass of support ideals containing it.
    """
    sets = getattr(ideal_poset, "ideal_sets", None)
    if sets is None:
        raise InvalidStructure("host does not index its elements by vertex sets")
    check_point(ideal_poset, x)
    out: dict[str, Fraction] = {}
    for e, v in x._items:
        for vertex in sets[e]:
            out[vertex] = out.get(vertex, Fraction(0)) + v
    return dict(sorted(out.items()))


def point_from_b(pip: Pip, coords: dict) -> Point:
    """Chain-form point (over ideal names) from vertex coordinates."""
    from .poset import ideal_name

    clean = check_b_point(pip, coords)
    levels = level_decomposition(clean)
    # coefficients are the successive value gaps between threshold sets
    acc: dict[str, Fraction] = {}
    top = levels[0][0] if levels else Fraction(0)
    for i, (val, members) in enumerate(levels):
        below = levels[i + 1][0] if i + 1 < len(levels) else Fraction(0)
        acc[ideal_name(members)] = val - below
    rest = 1 - top
    if rest < 0:
        raise InvalidPoint("coordinates exceed total mass 1")
    if rest:
        acc[ideal_name(frozenset())] = acc.get(ideal_name(frozenset()), Fraction(0)) + rest
    return Point(acc)


class BPolyPath:
    """Piecewise-linear path in vertex coordinates over a pip.

    Between consecutive breakpoints the coordinates interpolate linearly;
    that stays inside the complex as long as both endpoints are valid and
    their supports union to a stable ideal, which is what validate checks.
    """

    def __init__(self, pip: Pip, breakpoints):
        self.pip = pip
        bps = []
        for t, coords in breakpoints:
            bps.append((as_fraction(t), {k: as_fraction(v) for k, v in coords.items() if as_fraction(v)}))
        if len(bps) < 2:
            raise InvalidStructure("a path needs at least two breakpoints")
        if bps[0][0] != 0 or bps[-1][0] != 1:
            raise InvalidStructure("path must be parametrized over [0, 1]")
        for (t0, _), (t1, _) in zip(bps, bps[1:]):
            if not t0 < t1:
                raise InvalidStructure("breakpoint times must strictly increase")
        self.breakpoints = tuple(bps)

    def validate(self) -> "BPolyPath":
        for _, coords in self.breakpoints:
            check_b_point(self.pip, coords)
        for (_, c0), (_, c1) in zip(self.breakpoints, self.breakpoints[1:]):
            union = self.pip.mask_of(set(c0) | set(c1))
            if not (self.pip.is_ideal_mask(union) and self.pip.is_stable_mask(union)):
                raise NotCommonSimplex(
                    "consecutive breakpoints do not share a cube"
                )
        return self

    def point_at(self, t) -> dict:
        t = as_fraction(t)
        if t < 0 or t > 1:
            raise InvalidStructure(f"time {t} outside [0, 1]")
        bps = self.breakpoints
        lo, hi = 0, len(bps) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if bps[mid][0] <= t:
                lo = mid
            else:
                hi = mid
        t0, c0 = bps[lo]
        t1, c1 = bps[hi]
        if t == t0:
            return dict(c0)
        if t == t1:
            return dict(c1)
        s = (t - t0) / (t1 - t0)
        out = {}
        for v in set(c0) | set(c1):
            val = (1 - s) * c0.get(v, Fraction(0)) + s * c1.get(v, Fraction(0))
            if val:
                out[v] = val
        return out

    def length(self) -> float:
        total = []
        for (_, c0), (_, c1) in zip(self.breakpoints, self.breakpoints[1:]):
            sq = Fraction(0)
            for v in set(c0) | set(c1):
                d = c0.get(v, Fraction(0)) - c1.get(v, Fraction(0))
                sq += d * d
            total.append(math.sqrt(float(sq)))
        return math.fsum(total)
