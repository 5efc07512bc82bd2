"""Arches: monotone staircases between two elements, and their lengths.

An arch records, step by step, how much squared mass leaves the first
point's side and how much enters the second's.  Its value
v = sqrt( sum_i (sqrt(xsq_i) + sqrt(ysq_i))^2 ) is the length of the
corresponding staircase path; the geodesic realizes the minimum over arches,
attained at the concave ones (block norm ratios strictly increasing).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import EmptyBlock, InvalidStructure
from .points import Point, point_meet, sq_simplex_distance
from .radicals import SqrtSum, upper_right_chain


class Arch:
    """Members u_0..u_m with exact squared step masses on both sides."""

    __slots__ = ("members", "xsq", "ysq")

    def __init__(self, members, xsq, ysq):
        members = tuple(members)
        xsq = tuple(Fraction(v) for v in xsq)
        ysq = tuple(Fraction(v) for v in ysq)
        if len(members) < 2:
            raise InvalidStructure("an arch needs at least its two ends")
        if len(xsq) != len(members) - 1 or len(ysq) != len(members) - 1:
            raise InvalidStructure("one block per consecutive member pair")
        for i, (a, b) in enumerate(zip(xsq, ysq)):
            if a <= 0 or b <= 0:
                raise EmptyBlock(f"step {i} moves no mass on one side ({a}, {b})")
        self.members = members
        self.xsq = xsq
        self.ysq = ysq

    @property
    def steps(self) -> int:
        return len(self.members) - 1

    def cumulative_xi(self):
        """xi staircase points of the members, from (X,0) to (0,Y)."""
        xtot = sum(self.xsq, Fraction(0))
        pts = []
        cx, cy = xtot, Fraction(0)
        pts.append((cx, cy))
        for a, b in zip(self.xsq, self.ysq):
            cx -= a
            cy += b
            pts.append((cx, cy))
        return pts

    def __eq__(self, other):
        return (
            isinstance(other, Arch)
            and self.members == other.members
            and self.xsq == other.xsq
            and self.ysq == other.ysq
        )

    def __hash__(self):
        return hash((self.members, self.xsq, self.ysq))

    def __repr__(self):
        return f"Arch({list(self.members)!r})"


def v_sq(arch: Arch) -> SqrtSum:
    """Exact squared value: sum of (xsq_i + ysq_i) plus 2*sqrt(xsq_i*ysq_i)."""
    out = SqrtSum(0)
    for a, b in zip(arch.xsq, arch.ysq):
        out = out + SqrtSum(a + b) + SqrtSum.sqrt(a * b).scale(2)
    return out


def v_value(arch: Arch) -> float:
    total = math.fsum(
        (math.sqrt(float(a)) + math.sqrt(float(b))) ** 2
        for a, b in zip(arch.xsq, arch.ysq)
    )
    return math.sqrt(total)


def is_concave(arch: Arch) -> bool:
    """Strictly decreasing block ratios ysq/xsq, compared exactly.

    Decreasing ratios are what put the xi staircase in convex position, and
    they make the per-block transition times strictly increase.
    """
    for i in range(arch.steps - 1):
        if arch.ysq[i] * arch.xsq[i + 1] <= arch.ysq[i + 1] * arch.xsq[i]:
            return False
    return True


def xi(poset, u: str, x: Point, y: Point, base: str | None = None):
    """Squared distances of the meet-projections of x and y onto u, measured
    from the base vertex."""
    if base is None:
        base = poset.bottom
    if base is None:
        raise InvalidStructure("host has no bottom element")
    origin = Point.vertex(base)
    px = point_meet(poset, x, u)
    py = point_meet(poset, y, u)
    return (
        sq_simplex_distance(poset, px, origin),
        sq_simplex_distance(poset, py, origin),
    )


def arch_from_xi(members, xis) -> Arch:
    """Arch whose blocks are the xi differences along the member sequence."""
    xsq = []
    ysq = []
    for (x0, y0), (x1, y1) in zip(xis, xis[1:]):
        xsq.append(x0 - x1)
        ysq.append(y1 - y0)
    return Arch(members, xsq, ysq)


def extreme_arch(probe, end_x, end_y) -> Arch:
    """Arch through the extreme points of the achievable xi region.

    probe(w1, w2) must return (member, (xi1, xi2)) maximizing the positive
    functional w1*xi1 + w2*xi2, resolving ties toward the larger xi2 and then
    the lexicographically smallest member.  end_x and end_y are the
    (member, xi) pairs of the two ends; one linear probe is spent per
    discovered chord, as in a planar quickhull.
    """
    (px, xix), (qy, xiy) = end_x, end_y

    def recurse(lo, hi):
        (_, a), (_, b) = lo, hi
        w1 = b[1] - a[1]
        w2 = a[0] - b[0]
        if w1 < 0 or w2 < 0:
            raise InvalidStructure("extreme points out of order")
        member, pt = probe(w1, w2)
        if w1 * pt[0] + w2 * pt[1] > w1 * a[0] + w2 * a[1]:
            found = (member, pt)
            return recurse(lo, found) + [found] + recurse(found, hi)
        return []

    interior = recurse(end_x, end_y)
    members = [px] + [m for m, _ in interior] + [qy]
    xis = [xix] + [pt for _, pt in interior] + [xiy]
    return arch_from_xi(members, xis)


def concave_subarch(arch: Arch) -> Arch:
    """Restrict an arch to the extreme points of its xi staircase.

    The result is concave; merging staircase steps can only lengthen the
    value, so v(concave_subarch(A)) >= v(A), with equality exactly when A
    was concave already.
    """
    pts = arch.cumulative_xi()
    keep_pts = upper_right_chain(pts)
    by_x = {pt[0]: k for k, pt in enumerate(pts)}
    keep = sorted(by_x[p[0]] for p in keep_pts)
    assert keep[0] == 0 and keep[-1] == arch.steps
    members = [arch.members[k] for k in keep]
    xis = [pts[k] for k in keep]
    return arch_from_xi(members, xis)
