from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from l1paths.geometry import (
    BOUNDARY,
    COLLINEAR,
    EXTERIOR,
    INFINITE,
    INTERIOR,
    LEFT,
    RIGHT,
    Point,
    Polygon,
    Segment,
    format_rational,
    l1_length,
    on_segment,
    orientation,
    parse_rational,
    point_in_polygon,
    scaled_length,
    segments_intersect,
)

SCENE_A_VERTS = [(2, 1), (5, 2), (4, 6), (1, 5)]

coords = st.integers(min_value=-1000, max_value=1000)
points = st.builds(Point, coords, coords)


def test_l1_length_examples():
    assert l1_length(Point(0, 0), Point(3, 4)) == 7
    assert l1_length(Point(5, 5), Point(5, 5)) == 0
    assert l1_length(Point(-2, 3), Point(4, -1)) == 10


@given(points, points)
def test_l1_length_symmetric(a, b):
    assert l1_length(a, b) == l1_length(b, a)


@given(points, points, points)
def test_l1_triangle_inequality(a, b, c):
    assert l1_length(a, c) <= l1_length(a, b) + l1_length(b, c)


def test_orientation_examples():
    assert orientation(Point(0, 0), Point(1, 0), Point(0, 1)) == LEFT
    assert orientation(Point(0, 0), Point(1, 1), Point(2, 2)) == COLLINEAR
    assert orientation(Point(0, 0), Point(0, 1), Point(1, 0)) == RIGHT


@given(points, points, points)
def test_orientation_antisymmetric(a, b, c):
    assert orientation(a, b, c) == -orientation(a, c, b)


def test_segments_intersect_examples():
    # axis-parallel cross
    hit = segments_intersect(
        Segment(Point(0, 0), Point(4, 0)), Segment(Point(2, -1), Point(2, 1))
    )
    assert hit == Point(2, 0)
    # collinear gap
    assert (
        segments_intersect(
            Segment(Point(0, 0), Point(1, 0)), Segment(Point(2, 0), Point(3, 0))
        )
        is None
    )
    # collinear overlap
    hit = segments_intersect(
        Segment(Point(0, 0), Point(2, 2)), Segment(Point(1, 1), Point(3, 3))
    )
    assert hit == Segment(Point(1, 1), Point(2, 2))


def test_segments_intersect_rational_point():
    hit = segments_intersect(
        Segment(Point(0, 0), Point(3, 3)), Segment(Point(0, 3), Point(3, 0))
    )
    assert hit == Point(Fraction(3, 2), Fraction(3, 2))


def test_segments_touch_at_endpoint():
    hit = segments_intersect(
        Segment(Point(0, 0), Point(2, 0)), Segment(Point(2, 0), Point(2, 5))
    )
    assert hit == Point(2, 0)


@given(points, points, points, points)
@settings(max_examples=300)
def test_segments_intersect_symmetric(a, b, c, d):
    s1, s2 = Segment(a, b), Segment(c, d)
    h1 = segments_intersect(s1, s2)
    h2 = segments_intersect(s2, s1)
    if isinstance(h1, Segment):
        assert isinstance(h2, Segment)
        assert {h1.a, h1.b} == {h2.a, h2.b}
    else:
        assert h1 == h2


def test_point_in_polygon_scene_a():
    poly = Polygon(SCENE_A_VERTS)
    assert point_in_polygon(Point(0, 0), poly) == EXTERIOR
    assert point_in_polygon(Point(2, 1), poly) == BOUNDARY
    assert point_in_polygon(Point(3, 3), poly) == INTERIOR


def test_polygon_validity_helpers():
    poly = Polygon(SCENE_A_VERTS)
    assert poly.signed_area2() == 26
    assert poly.is_simple()
    assert not poly.is_rectilinear()
    bowtie = Polygon([(0, 0), (2, 2), (2, 0), (0, 2)])
    assert not bowtie.is_simple()
    rect = Polygon([(1, 1), (3, 1), (3, 3), (1, 3)])
    assert rect.is_rectilinear()


def _winding_number_inside(p, poly):
    """Independent oracle: winding number with exact arithmetic."""
    wn = 0
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if a.y <= p.y:
            if b.y > p.y and orientation(a, b, p) == LEFT:
                wn += 1
        else:
            if b.y <= p.y and orientation(a, b, p) == RIGHT:
                wn -= 1
    return wn != 0


@st.composite
def simple_polygons(draw):
    # star-shaped around the centroid; guaranteed simple after dedup
    import math as _math

    k = draw(st.integers(min_value=3, max_value=9))
    angles = sorted(draw(st.lists(st.floats(0, 2 * _math.pi - 0.01), min_size=k, max_size=k, unique=True)))
    pts = []
    for ang in angles:
        r = draw(st.integers(min_value=5, max_value=30))
        pts.append((round(r * _math.cos(ang)), round(r * _math.sin(ang))))
    poly = Polygon(dict.fromkeys(pts))
    if len(poly) < 3 or not poly.is_simple():
        return draw(simple_polygons())
    if poly.signed_area2() < 0:
        poly = Polygon(reversed(poly.vertices))
    if poly.signed_area2() == 0:
        return draw(simple_polygons())
    return poly


@given(simple_polygons(), st.integers(-35, 35), st.integers(-35, 35))
@settings(max_examples=500, deadline=None)
def test_point_in_polygon_matches_winding_number(poly, px, py):
    p = Point(px, py)
    got = point_in_polygon(p, poly)
    if got == BOUNDARY:
        assert any(on_segment(p, e) for e in poly.edges())
    else:
        assert (got == INTERIOR) == _winding_number_inside(p, poly)


def test_point_in_polygon_bulk_against_winding():
    import random

    rng = random.Random(99)
    polys = [
        Polygon(SCENE_A_VERTS),
        Polygon([(1, 1), (3, 1), (3, 3), (1, 3)]),
        Polygon([(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)]),
        Polygon([(0, 0), (8, 1), (9, 7), (4, 9), (-1, 6)]),
    ]
    checked = 0
    for _ in range(20000):
        poly = polys[rng.randrange(len(polys))]
        p = Point(rng.randint(-3, 11), rng.randint(-3, 11))
        got = point_in_polygon(p, poly)
        if got == BOUNDARY:
            assert any(on_segment(p, e) for e in poly.edges())
        else:
            assert (got == INTERIOR) == _winding_number_inside(p, poly)
        checked += 1
    assert checked == 20000


def test_scaled_length_infinite():
    assert scaled_length(0, INFINITE) == 0
    assert scaled_length(5, INFINITE) == INFINITE
    assert scaled_length(4, Fraction(1, 2)) == 6


def test_rational_round_trip():
    for text in ("3", "-4", "1/2", "-7/3", "inf"):
        assert format_rational(parse_rational(text)) == text
