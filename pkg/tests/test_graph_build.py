import heapq
import random

import pytest

from l1paths.cutline import build_cutline_tree
from l1paths.geometry import Point, l1_length
from l1paths.graph_build import (
    BASIC,
    ENHANCED,
    TYPE1,
    TYPE2,
    TYPE3,
    VERTEX,
    build_basic_graph,
    build_enhanced_graph,
    dedupe_and_index,
)
from l1paths.oracle import UnweightedOracle, segment_free
from l1paths.scene import POLYGONAL, SCENE_A, generate_scene
from l1paths.visibility import VisibilityIndex


def build_all(scene):
    vis = VisibilityIndex(scene)
    verts = [v for p in scene.obstacles for v in p.vertices]
    tree = build_cutline_tree(verts)
    return vis, tree


def dijkstra(g, src):
    dist = {src: 0}
    heap = [(0, src)]
    seen = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in seen:
            continue
        seen.add(u)
        for v, w in g.adj[u].items():
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


@pytest.fixture(scope="module")
def scene_a_graphs():
    vis, tree = build_all(SCENE_A)
    return {
        "vis": vis,
        "tree": tree,
        "basic": build_basic_graph(SCENE_A, tree, vis),
        "enhanced": build_enhanced_graph(SCENE_A, tree, vis),
    }


def test_scene_a_vertex_is_its_own_steiner_point(scene_a_graphs):
    g = scene_a_graphs["basic"]
    tree = scene_a_graphs["tree"]
    root = tree.root
    assert tree.node(root).coord == 2
    ids = g.cutline_nodes[root]
    locs = [g.nodes[i].location for i in ids]
    assert Point(2, 1) in locs  # the vertex sits on its own cut-line
    nid = g.node_at[Point(2, 1)]
    assert g.nodes[nid].kind == VERTEX  # merged, vertex identity wins


def test_scene_a_boundary_edge_length(scene_a_graphs):
    g = scene_a_graphs["basic"]
    a = g.node_at[Point(2, 1)]
    b = g.node_at[Point(5, 2)]
    assert g.adj[a][b] == 4
    d = dijkstra(g, a)
    assert d[b] == 4


def test_minimal_scene_counting_caps():
    scene = generate_scene(3, 1, POLYGONAL, seed=5)
    vis, tree = build_all(scene)
    g = build_basic_graph(scene, tree, vis)
    kinds = [n.kind for n in g.nodes]
    assert kinds.count(VERTEX) == 3
    assert kinds.count(TYPE1) <= 12
    assert kinds.count(TYPE2) <= 6


def test_enhanced_contains_basic_nodes(scene_a_graphs):
    basic = scene_a_graphs["basic"]
    enh = scene_a_graphs["enhanced"]
    for p in basic.node_at:
        assert p in enh.node_at
    # small trees degenerate: every type-2 regenerated as type-3 and merged
    assert enh.node_count() >= basic.node_count()


def test_edge_lengths_are_exact_l1(scene_a_graphs):
    for key in ("basic", "enhanced"):
        g = scene_a_graphs[key]
        for u in range(g.node_count()):
            for v, w in g.adj[u].items():
                assert w == l1_length(g.nodes[u].location, g.nodes[v].location)


def test_type3_segments_avoid_interiors():
    scene = generate_scene(24, 2, POLYGONAL, seed=9)
    vis, tree = build_all(scene)
    g = build_enhanced_graph(scene, tree, vis)
    verts = list(tree.points)
    for nid, sp in enumerate(g.nodes):
        if sp.kind not in (TYPE2, TYPE3):
            continue
        v = verts[sp.defining_vertex]
        assert segment_free(scene, v, sp.location), (v, sp)


def test_cutline_edges_reverified_by_ray_casting():
    scene = generate_scene(20, 2, POLYGONAL, seed=13)
    vis, tree = build_all(scene)
    g = build_enhanced_graph(scene, tree, vis)
    rng = random.Random(0)
    checked = 0
    for tid, ids in g.cutline_nodes.items():
        for a, b in zip(ids, ids[1:]):
            pa, pb = g.nodes[a].location, g.nodes[b].location
            if b in g.adj[a] and g.adj[a][b] == abs(pb.y - pa.y):
                assert segment_free(scene, pa, pb), (pa, pb)
                checked += 1
            else:
                # not connected along the line: some interior must intervene
                if pa.x == pb.x:
                    assert not segment_free(scene, pa, pb) or any(
                        g.nodes[m].location.y > min(pa.y, pb.y)
                        and g.nodes[m].location.y < max(pa.y, pb.y)
                        for m in ids
                    )
    assert checked > 0


def test_graph_distance_matches_oracle_exhaustive():
    for seed in (1, 2, 3):
        scene = generate_scene(random.Random(seed).randint(9, 16), 2, POLYGONAL, seed=seed)
        vis, tree = build_all(scene)
        basic = build_basic_graph(scene, tree, vis)
        enh = build_enhanced_graph(scene, tree, vis)
        oracle = UnweightedOracle(scene)
        verts = list(tree.points)
        for i in range(len(verts)):
            db = dijkstra(basic, basic.node_at[verts[i]])
            de = dijkstra(enh, enh.node_at[verts[i]])
            for j in range(i + 1, len(verts)):
                expect = oracle.query(verts[i], verts[j]).length
                got_b = db[basic.node_at[verts[j]]]
                got_e = de[enh.node_at[verts[j]]]
                assert got_b == expect, (verts[i], verts[j], got_b, expect)
                assert got_e == expect, (verts[i], verts[j], got_e, expect)


def test_dedupe_idempotent(scene_a_graphs):
    g = scene_a_graphs["enhanced"]
    before_nodes = [n.location for n in g.nodes]
    before_cut = {k: list(v) for k, v in g.cutline_nodes.items()}
    before_chains = {k: list(v) for k, v in g.edge_chains.items()}
    dedupe_and_index(g)
    dedupe_and_index(g)
    assert [n.location for n in g.nodes] == before_nodes
    assert {k: list(v) for k, v in g.cutline_nodes.items()} == before_cut
    assert {k: list(v) for k, v in g.edge_chains.items()} == before_chains


def test_cutline_lists_sorted_strictly_increasing(scene_a_graphs):
    g = scene_a_graphs["enhanced"]
    for ids in g.cutline_nodes.values():
        ys = [g.nodes[i].location.y for i in ids]
        assert ys == sorted(ys)
        assert len(set(ys)) == len(ys)


def test_deterministic_build():
    scene = generate_scene(18, 2, POLYGONAL, seed=21)
    vis1, tree1 = build_all(scene)
    vis2, tree2 = build_all(scene)
    g1 = build_enhanced_graph(scene, tree1, vis1)
    g2 = build_enhanced_graph(scene, tree2, vis2)
    assert [n.location for n in g1.nodes] == [n.location for n in g2.nodes]
    assert g1.adj == g2.adj
