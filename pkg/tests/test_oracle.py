import random
from fractions import Fraction

import pytest

from l1paths.errors import EngineError
from l1paths.geometry import INFINITE, Point, Polygon, l1_length
from l1paths.oracle import (
    UnweightedOracle,
    WeightedOracle,
    _blocked_exact,
    oracle_unweighted,
    oracle_weighted,
    path_length,
    segment_free,
)
from l1paths.scene import (
    POLYGONAL,
    RECTILINEAR_WEIGHTED,
    SCENE_A,
    SCENE_W,
    Scene,
    generate_scene,
)


def test_unweighted_fixtures():
    assert oracle_unweighted(SCENE_A, Point(0, 3), Point(6, 3)).length == 10
    assert oracle_unweighted(SCENE_A, Point(0, 0), Point(6, 6)).length == 12
    assert oracle_unweighted(SCENE_A, Point(0, 0), Point(0, 0)).length == 0


def test_unweighted_empty_scene_is_l1():
    scene = Scene(obstacles=(), bbox=(-10, -10, 10, 10), mode=POLYGONAL)
    rng = random.Random(0)
    for _ in range(20):
        s = Point(rng.randint(-10, 10), rng.randint(-10, 10))
        t = Point(rng.randint(-10, 10), rng.randint(-10, 10))
        assert oracle_unweighted(scene, s, t).length == l1_length(s, t)


def test_unweighted_rejects_interior_point():
    with pytest.raises(EngineError) as err:
        oracle_unweighted(SCENE_A, Point(3, 3), Point(0, 0))
    assert err.value.code == "POINT_INSIDE_OBSTACLE"


def test_path_repricing_and_freeness():
    rng = random.Random(3)
    for seed in range(5):
        scene = generate_scene(16 + seed, 2, POLYGONAL, seed=seed + 60)
        oracle = UnweightedOracle(scene)
        x0, y0, x1, y1 = scene.bbox
        for _ in range(15):
            s = Point(rng.randint(x0, x1), rng.randint(y0, y1))
            t = Point(rng.randint(x0, x1), rng.randint(y0, y1))
            try:
                res = oracle.query(s, t)
            except EngineError:
                continue
            assert path_length(res.polyline) == res.length
            for a, b in zip(res.polyline, res.polyline[1:]):
                assert segment_free(scene, a, b), (a, b)


def test_unweighted_symmetry_and_triangle():
    rng = random.Random(4)
    scene = generate_scene(20, 3, POLYGONAL, seed=77)
    oracle = UnweightedOracle(scene)
    x0, y0, x1, y1 = scene.bbox

    def free_point():
        while True:
            p = Point(rng.randint(x0, x1), rng.randint(y0, y1))
            try:
                oracle.query(p, p)
                return p
            except EngineError:
                continue

    for _ in range(12):
        a, b, c = free_point(), free_point(), free_point()
        dab = oracle.query(a, b).length
        dba = oracle.query(b, a).length
        assert dab == dba
        assert dab >= l1_length(a, b)
        assert oracle.query(a, c).length <= dab + oracle.query(b, c).length


def test_segment_free_blocked_diagonal():
    # the diagonal between opposite vertices of SCENE-A crosses its interior
    assert not segment_free(SCENE_A, Point(2, 1), Point(4, 6))
    # boundary edge is free (closed free space)
    assert segment_free(SCENE_A, Point(2, 1), Point(5, 2))


def test_blocked_exact_collinear_overlap_not_blocked():
    poly = Polygon([(0, 0), (4, 0), (4, 4), (0, 4)])
    assert not _blocked_exact(Point(-2, 0), Point(6, 0), poly)
    assert _blocked_exact(Point(-2, 2), Point(6, 2), poly)


def test_weighted_fixtures():
    assert oracle_weighted(SCENE_W, Point(0, 2), Point(4, 2)).length == 5
    # infinite weight makes the interior impassable: equals unweighted around
    winf = Scene(obstacles=SCENE_W.obstacles, bbox=SCENE_W.bbox,
                 mode=RECTILINEAR_WEIGHTED, weights=(INFINITE,))
    res = oracle_weighted(winf, Point(0, 2), Point(4, 2))
    assert res.length == 6
    # transparent obstacles: plain L1
    w0 = Scene(obstacles=SCENE_W.obstacles, bbox=SCENE_W.bbox,
               mode=RECTILINEAR_WEIGHTED, weights=(0,))
    assert oracle_weighted(w0, Point(0, 2), Point(4, 2)).length == 4


def test_weighted_weight_two_goes_around():
    w2 = Scene(obstacles=SCENE_W.obstacles, bbox=SCENE_W.bbox,
               mode=RECTILINEAR_WEIGHTED, weights=(2,))
    assert oracle_weighted(w2, Point(0, 2), Point(4, 2)).length == 6


def test_weighted_path_repricing():
    # reprice the reported polyline with a hand-rolled piecewise rule
    res = oracle_weighted(SCENE_W, Point(0, 2), Point(4, 2))
    total = 0
    for a, b in zip(res.polyline, res.polyline[1:]):
        assert a.x == b.x or a.y == b.y
        if a.y == b.y:
            lo, hi = sorted((a.x, b.x))
        else:
            lo, hi = sorted((a.y, b.y))
        cuts = sorted({lo, hi} | {c for c in (1, 3) if lo < c < hi})
        for c1, c2 in zip(cuts, cuts[1:]):
            mid = Fraction(c1 + c2, 2)
            p = Point(mid, a.y) if a.y == b.y else Point(a.x, mid)
            inside = 1 < p.x < 3 and 1 < p.y < 3
            rate = Fraction(3, 2) if inside else 1
            total += rate * (c2 - c1)
    assert total == res.length


def test_weighted_refinement_stability_fuzz():
    rng = random.Random(9)
    for seed in range(4):
        scene = generate_scene(12, 2, RECTILINEAR_WEIGHTED, seed=seed + 20)
        base = WeightedOracle(scene)
        fine = WeightedOracle(scene, refine=True)
        x0, y0, x1, y1 = scene.bbox
        done = 0
        while done < 6:
            s = Point(rng.randint(x0, x1), rng.randint(y0, y1))
            t = Point(rng.randint(x0, x1), rng.randint(y0, y1))
            try:
                b = base.query(s, t)
            except EngineError:
                continue
            f = fine.query(s, t)
            assert b.length == f.length, (s, t)
            done += 1


def test_weighted_infinite_matches_unweighted_engine_scene():
    # all-infinite weights reduce to hard obstacles
    rng = random.Random(11)
    scene = generate_scene(16, 2, RECTILINEAR_WEIGHTED, seed=31,
                           weight_palette=(INFINITE,))
    x0, y0, x1, y1 = scene.bbox
    done = 0
    while done < 10:
        s = Point(rng.randint(x0, x1), rng.randint(y0, y1))
        t = Point(rng.randint(x0, x1), rng.randint(y0, y1))
        try:
            w = oracle_weighted(scene, s, t)
            u = oracle_unweighted(scene, s, t)
        except EngineError:
            continue
        assert w.length == u.length, (s, t)
        done += 1
