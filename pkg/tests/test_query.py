import random

import pytest

from l1paths.errors import EngineError
from l1paths.geometry import Point, l1_length
from l1paths.graph_build import BASIC, ENHANCED
from l1paths.oracle import oracle_unweighted, path_length, segment_free
from l1paths.query import (
    FULL,
    ON_DEMAND,
    TRIVIAL,
    VIA_GATEWAYS,
    PreprocessedIndex,
    batch_query,
    preprocess,
    query,
)
from l1paths.scene import POLYGONAL, SCENE_A, Scene, generate_scene


@pytest.fixture(scope="module")
def idx_a():
    return preprocess(SCENE_A, ENHANCED, ON_DEMAND)


@pytest.fixture(scope="module")
def idx_a_full():
    return preprocess(SCENE_A, ENHANCED, FULL)


def test_scene_a_blocked_pair(idx_a):
    res = query(idx_a, Point(0, 3), Point(6, 3), want_path=True)
    assert res.length == 10
    assert res.kind == VIA_GATEWAYS
    assert res.path[0] == Point(0, 3) and res.path[-1] == Point(6, 3)
    assert path_length(res.path) == 10
    for a, b in zip(res.path, res.path[1:]):
        assert segment_free(SCENE_A, a, b)
    # the canonical bends are visited
    assert Point(2, 1) in res.path and Point(5, 2) in res.path


def test_scene_a_trivial_pair(idx_a):
    res = query(idx_a, Point(0, 0), Point(6, 6), want_path=True)
    assert res.length == 12
    assert res.kind == TRIVIAL
    assert path_length(res.path) == 12


def test_identity_query(idx_a):
    res = query(idx_a, Point(0, 0), Point(0, 0), want_path=True)
    assert res.length == 0 and res.path == (Point(0, 0),)


def test_apsp_fixture(idx_a_full):
    g = idx_a_full.graph
    a = g.node_at[Point(2, 1)]
    b = g.node_at[Point(5, 2)]
    assert idx_a_full.apsp[a][b] == 4
    for nid in range(g.node_count()):
        assert idx_a_full.apsp[nid][nid] == 0


def test_full_equals_on_demand(idx_a, idx_a_full):
    rng = random.Random(2)
    for _ in range(60):
        s = Point(rng.randint(-1, 7), rng.randint(-1, 7))
        t = Point(rng.randint(-1, 7), rng.randint(-1, 7))
        try:
            r1 = query(idx_a, s, t)
        except EngineError as err:
            with pytest.raises(EngineError):
                query(idx_a_full, s, t)
            continue
        r2 = query(idx_a_full, s, t)
        assert r1.length == r2.length, (s, t)


def test_index_too_large_budget():
    # a 5000-vertex scene cannot be tabled inside the default 2 GiB
    from l1paths.query import _estimate_full_nodes, _BYTES_PER_TABLE_ENTRY
    from l1paths.scene import compute_stats

    est = _estimate_full_nodes(compute_stats(5000, 50), ENHANCED)
    assert est * est * _BYTES_PER_TABLE_ENTRY > (2 << 30)
    # and an actual small-budget preprocess trips the guard up front
    with pytest.raises(EngineError) as err:
        preprocess(SCENE_A, ENHANCED, FULL, budget_bytes=10)
    assert err.value.code == "INDEX_TOO_LARGE"


def test_error_codes(idx_a):
    with pytest.raises(EngineError) as err:
        query(idx_a, Point(3, 3), Point(0, 0))
    assert err.value.code == "POINT_INSIDE_OBSTACLE"
    with pytest.raises(EngineError) as err:
        query(idx_a, Point(0, 0), Point(50, 0))
    assert err.value.code == "OUT_OF_BBOX"


def test_batch_query_isolation(idx_a):
    pairs = [
        (Point(0, 3), Point(6, 3)),
        (Point(3, 3), Point(0, 0)),  # interior start
        (Point(6, 3), Point(0, 3)),
    ]
    out = batch_query(idx_a, pairs)
    assert out[0].length == 10
    assert isinstance(out[1], EngineError)
    assert out[2].length == 10  # symmetry
    assert batch_query(idx_a, []) == []


def test_batch_query_threads_match(idx_a):
    rng = random.Random(8)
    pairs = []
    while len(pairs) < 10:
        s = Point(rng.randint(-1, 7), rng.randint(-1, 7))
        t = Point(rng.randint(-1, 7), rng.randint(-1, 7))
        pairs.append((s, t))
    seq = batch_query(idx_a, pairs)
    par = batch_query(idx_a, pairs, threads=4)
    for a, b in zip(seq, par):
        if isinstance(a, EngineError):
            assert isinstance(b, EngineError)
        else:
            assert a.length == b.length


@pytest.mark.parametrize("seed", range(6))
def test_query_matches_oracle_fuzz(seed):
    scene = generate_scene(14 + 3 * seed, 1 + seed % 4, POLYGONAL, seed=seed + 500)
    idx_e = preprocess(scene, ENHANCED, ON_DEMAND)
    idx_b = preprocess(scene, BASIC, ON_DEMAND)
    rng = random.Random(seed)
    x0, y0, x1, y1 = scene.bbox
    done = 0
    while done < 25:
        s = Point(rng.randint(x0, x1), rng.randint(y0, y1))
        t = Point(rng.randint(x0, x1), rng.randint(y0, y1))
        try:
            expect = oracle_unweighted(scene, s, t).length
        except EngineError:
            continue
        re = query(idx_e, s, t, want_path=True)
        rb = query(idx_b, s, t)
        assert re.length == expect, (s, t, re.length, expect)
        assert rb.length == expect, (s, t, rb.length, expect)
        assert path_length(re.path) == re.length
        for a, b in zip(re.path, re.path[1:]):
            assert segment_free(scene, a, b), (s, t, a, b)
        done += 1


def test_distance_properties_fuzz(idx_a):
    rng = random.Random(4)
    pts = []
    while len(pts) < 12:
        p = Point(rng.randint(-1, 7), rng.randint(-1, 7))
        try:
            idx_a.vis.require_free(p)
        except EngineError:
            continue
        pts.append(p)

    def d(a, b):
        return query(idx_a, a, b).length

    for i in range(0, 9, 3):
        a, b, c = pts[i], pts[i + 1], pts[i + 2]
        assert d(a, b) == d(b, a)
        assert d(a, b) >= l1_length(a, b)
        assert d(a, c) <= d(a, b) + d(b, c)


def test_empty_scene_queries():
    scene = Scene(obstacles=(), bbox=(0, 0, 30, 30), mode=POLYGONAL)
    idx = preprocess(scene)
    rng = random.Random(0)
    for _ in range(20):
        s = Point(rng.randint(0, 30), rng.randint(0, 30))
        t = Point(rng.randint(0, 30), rng.randint(0, 30))
        res = query(idx, s, t, want_path=True)
        assert res.length == l1_length(s, t)
        assert path_length(res.path) == res.length
