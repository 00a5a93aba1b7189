"""Exact geometric primitives.

All predicates run on integers or `fractions.Fraction`; there is no
floating point anywhere, so equality tests downstream are meaningful.
Coordinates of scene vertices are ints; derived points (ray hits on
sloped edges) may carry one Fraction coordinate.

Infinite weights are represented by `math.inf`, which is absorbing for
the additions and positive scalings we perform.  The helpers below guard
the one undefined case (0 * inf).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Optional, Union

Coord = Union[int, Fraction]

INFINITE = math.inf

# orientation() results
LEFT = 1
RIGHT = -1
COLLINEAR = 0

# point_in_polygon() / locate() classifications
INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"

# coordinate magnitude cap: keeps 128-bit intermediates exact in fixed
# width implementations and keeps serialized scenes sane
MAX_COORD = 1 << 62


class Point(NamedTuple):
    x: Coord
    y: Coord


class Segment(NamedTuple):
    a: Point
    b: Point


def norm_coord(v: Coord) -> Coord:
    """Collapse integral Fractions to plain ints (canonical form)."""
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


def norm_point(p: Point) -> Point:
    return Point(norm_coord(p.x), norm_coord(p.y))


def l1_length(a: Point, b: Point) -> Coord:
    """L1 (Manhattan) distance |ax-bx| + |ay-by|."""
    return abs(a.x - b.x) + abs(a.y - b.y)


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of the cross product (b-a) x (c-a).

    LEFT (+1) when c lies left of the directed line a->b, RIGHT (-1)
    when right, COLLINEAR (0) when on the line.
    """
    v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    if v > 0:
        return LEFT
    if v < 0:
        return RIGHT
    return COLLINEAR


def on_segment(p: Point, s: Segment) -> bool:
    """Exact test: p lies on the closed segment s."""
    if orientation(s.a, s.b, p) != COLLINEAR:
        return False
    return (
        min(s.a.x, s.b.x) <= p.x <= max(s.a.x, s.b.x)
        and min(s.a.y, s.b.y) <= p.y <= max(s.a.y, s.b.y)
    )


def segments_intersect(s1: Segment, s2: Segment) -> Optional[Union[Point, Segment]]:
    """Exact segment intersection.

    Returns None when disjoint, a Point for a single intersection point
    (proper crossing or endpoint touch), or a Segment for a collinear
    overlap of positive length.
    """
    p, q = s1
    r, s = s2
    d1 = orientation(r, s, p)
    d2 = orientation(r, s, q)
    d3 = orientation(p, q, r)
    d4 = orientation(p, q, s)

    if d1 != d2 and d3 != d4 and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        # proper crossing: solve p + t*(q-p) with exact rational t
        rxs = (q.x - p.x) * (s.y - r.y) - (q.y - p.y) * (s.x - r.x)
        t = Fraction((r.x - p.x) * (s.y - r.y) - (r.y - p.y) * (s.x - r.x), rxs)
        ix = norm_coord(p.x + t * (q.x - p.x))
        iy = norm_coord(p.y + t * (q.y - p.y))
        return Point(ix, iy)

    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        # collinear; order along the dominant axis
        if (abs(q.x - p.x), abs(q.y - p.y)) >= (abs(s.x - r.x), abs(s.y - r.y)):
            base, other = (p, q), (r, s)
        else:
            base, other = (r, s), (p, q)
        key = (lambda pt: (pt.x, pt.y)) if base[0].x != base[1].x else (lambda pt: (pt.y, pt.x))
        lo1, hi1 = sorted((p, q), key=key)
        lo2, hi2 = sorted((r, s), key=key)
        lo = max(lo1, lo2, key=key)
        hi = min(hi1, hi2, key=key)
        if key(lo) > key(hi):
            return None
        if lo == hi:
            return lo
        return Segment(lo, hi)

    # touching cases: an endpoint of one lies on the other
    for pt in (p, q):
        if on_segment(pt, s2):
            return pt
    for pt in (r, s):
        if on_segment(pt, s1):
            return pt
    return None


class Polygon:
    """Simple polygon with counterclockwise integer vertices."""

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        self.vertices = tuple(Point(*v) for v in vertices)

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return isinstance(other, Polygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"Polygon({list(self.vertices)!r})"

    def edges(self):
        """Directed boundary edges following vertex order."""
        n = len(self.vertices)
        return [Segment(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def signed_area2(self) -> int:
        """Twice the signed area (positive for counterclockwise)."""
        total = 0
        n = len(self.vertices)
        for i in range(n):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % n]
            total += a.x * b.y - b.x * a.y
        return total

    def is_simple(self) -> bool:
        """No two non-adjacent edges intersect; adjacent ones only touch
        at their shared vertex, and no edge has zero length."""
        edges = self.edges()
        n = len(edges)
        for e in edges:
            if e.a == e.b:
                return False
        for i in range(n):
            for j in range(i + 1, n):
                hit = segments_intersect(edges[i], edges[j])
                if hit is None:
                    continue
                adjacent = j == i + 1 or (i == 0 and j == n - 1)
                if not adjacent:
                    return False
                if isinstance(hit, Segment):
                    return False
                shared = edges[i].b if j == i + 1 else edges[i].a
                if hit != shared:
                    return False
        return True

    def bounding_box(self):
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def is_rectilinear(self) -> bool:
        return all(e.a.x == e.b.x or e.a.y == e.b.y for e in self.edges())


def point_in_polygon(p: Point, poly: Polygon) -> str:
    """Exact classification of p against a simple polygon.

    Crossing-count with the horizontal rightward ray; boundary cases are
    peeled off first so the parity walk never sees them.
    """
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        if on_segment(p, Segment(verts[i], verts[(i + 1) % n])):
            return BOUNDARY
    inside = False
    px, py = p
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        if (y1 > py) != (y2 > py):
            # x coordinate of the edge at height py, compared without division
            # px < x1 + (py-y1)*(x2-x1)/(y2-y1)
            lhs = (px - x1) * (y2 - y1)
            rhs = (py - y1) * (x2 - x1)
            if y2 > y1:
                crossed = lhs < rhs
            else:
                crossed = lhs > rhs
            if crossed:
                inside = not inside
    return INTERIOR if inside else EXTERIOR


def scaled_length(length: Coord, weight) -> Coord:
    """Weighted length (1 + weight) * length; 0 * inf is defined as 0."""
    if length == 0:
        return 0
    if weight == INFINITE:
        return INFINITE
    return (1 + weight) * length


def parse_rational(text: str):
    """Parse 'num/den', plain integer, or 'inf' into Fraction/int/inf."""
    text = text.strip()
    if text in ("inf", "+inf", "infinity"):
        return INFINITE
    if "/" in text:
        num, den = text.split("/", 1)
        return norm_coord(Fraction(int(num), int(den)))
    return int(text)


def format_rational(v) -> str:
    """Inverse of parse_rational for exact serialization."""
    if v == INFINITE:
        return "inf"
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    return str(v)
