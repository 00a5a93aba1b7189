import random

import pytest

from l1paths.cutline import (
    X_AXIS,
    Y_AXIS,
    build_cutline_tree,
    projection_cutlines,
    relevant_projection_cutlines,
)
from l1paths.errors import EngineError
from l1paths.geometry import Point
from l1paths.scene import POLYGONAL, SCENE_A, Scene, generate_scene
from l1paths.visibility import VisibilityIndex


def scene_a_tree():
    return build_cutline_tree([v for p in SCENE_A.obstacles for v in p.vertices], X_AXIS)


def test_scene_a_tree_shape():
    tree = scene_a_tree()
    root = tree.node(tree.root)
    assert root.coord == 2  # lower median of x-coords 1,2,4,5
    left = tree.node(root.left)
    right = tree.node(root.right)
    assert [tree.points[i].x for i in left.members] == [1]
    assert sorted(tree.points[i].x for i in right.members) == [4, 5]
    assert left.left is None and left.right is None
    assert right.coord == 4
    leaf = tree.node(right.right)
    assert [tree.points[i].x for i in leaf.members] == [5]
    assert tree.depth == 3
    assert tree.super_level_size == 2  # ceil(sqrt(3))
    assert tree.super_levels == 2


def test_singleton_tree():
    tree = build_cutline_tree([Point(5, 5)])
    assert len(tree.nodes) == 1
    assert tree.depth == 1
    node = tree.node(tree.root)
    assert node.left is None and node.right is None


def test_empty_point_set():
    with pytest.raises(EngineError) as err:
        build_cutline_tree([])
    assert err.value.code == "EMPTY_POINT_SET"


def test_sixteen_points_realized_depth():
    # with strict left/right children and the median excluded, 16 distinct
    # coordinates realize depth ceil(log2 16) + 1 = 5; the grouping then
    # uses blocks of ceil(sqrt(5)) = 3 levels, giving 2 super-levels
    pts = [Point(i, i) for i in range(16)]
    tree = build_cutline_tree(pts, X_AXIS)
    assert tree.depth == 5
    assert tree.super_level_size == 3
    assert tree.super_levels == 2


@pytest.mark.parametrize("k", [2, 3, 5, 7, 8, 20, 33, 64])
def test_depth_bound(k):
    import math

    rng = random.Random(k)
    xs = rng.sample(range(10 * k), k)
    tree = build_cutline_tree([Point(x, 0) for x in xs], X_AXIS)
    assert tree.depth <= math.ceil(math.log2(k)) + 1
    # strict splitting: children never contain the node coordinate
    for node in tree.nodes:
        for cid, side in ((node.left, "l"), (node.right, "r")):
            if cid is None:
                continue
            child = tree.node(cid)
            for i in child.members:
                if side == "l":
                    assert tree.points[i].x < node.coord
                else:
                    assert tree.points[i].x > node.coord


def test_ties_stay_at_node():
    pts = [Point(2, i) for i in range(4)] + [Point(5, 0), Point(7, 0)]
    tree = build_cutline_tree(pts, X_AXIS)
    root = tree.node(tree.root)
    assert root.coord == 2
    assert root.left is None
    right = tree.node(root.right)
    assert sorted(tree.points[i].x for i in right.members) == [5, 7]


def test_horizontal_axis():
    pts = [Point(0, 3), Point(0, 9), Point(0, 1)]
    tree = build_cutline_tree(pts, Y_AXIS)
    assert tree.node(tree.root).coord == 3


def test_projection_cutlines_scene_a():
    tree = scene_a_tree()
    vis = VisibilityIndex(SCENE_A)
    # (0,3): rightward visibility stops at x=3/2, so the root line x=2 is
    # not visible; descend left to the leaf line x=1
    ids = projection_cutlines(Point(0, 3), tree, vis)
    assert [tree.node(i).coord for i in ids] == [1]
    # (6,3): leftward visibility stops at 19/4, blocking x=2 and x=4
    ids = projection_cutlines(Point(6, 3), tree, vis)
    assert [tree.node(i).coord for i in ids] == [5]


def test_projection_cutlines_empty_scene():
    scene = Scene(obstacles=(), bbox=(-5, -5, 25, 25), mode=POLYGONAL)
    vis = VisibilityIndex(scene)
    pts = [Point(i * 2, i) for i in range(8)]
    tree = build_cutline_tree(pts, X_AXIS)
    ids = projection_cutlines(Point(5, 20), tree, vis)
    # nothing blocks: every node on the root-leaf path is emitted
    path_len = 0
    nid = tree.root
    qc = 5
    while nid is not None:
        node = tree.node(nid)
        path_len += 1
        nid = node.left if qc <= node.coord else node.right
    assert len(ids) == path_len


def test_relevant_cutlines_scene_a():
    tree = scene_a_tree()
    vis = VisibilityIndex(SCENE_A)
    ids = relevant_projection_cutlines(Point(6, 3), tree, vis)
    assert [tree.node(i).coord for i in ids] == [5]
    ids = relevant_projection_cutlines(Point(0, 3), tree, vis)
    assert [tree.node(i).coord for i in ids] == [1]


def test_relevant_cutlines_full_visibility():
    scene = Scene(obstacles=(), bbox=(-5, -5, 40, 40), mode=POLYGONAL)
    vis = VisibilityIndex(scene)
    pts = [Point(i * 2, i) for i in range(16)]
    tree = build_cutline_tree(pts, X_AXIS)
    q = Point(15, 20)
    rel = relevant_projection_cutlines(q, tree, vis)
    by_super = {}
    for nid in rel:
        node = tree.node(nid)
        side = "l" if node.coord < q.x else "r"
        key = (node.super_level, side)
        assert key not in by_super
        by_super[key] = node
    assert len(rel) <= 2 * tree.super_levels
    # where both sides occur in a super-level, exactly one line per side
    projected = projection_cutlines(q, tree, vis)
    for nid in projected:
        node = tree.node(nid)
        side = "l" if node.coord < q.x else "r"
        best = by_super.get((node.super_level, side))
        assert best is not None and best.level >= node.level


@pytest.mark.parametrize("seed", range(8))
def test_fuzz_projection_properties(seed):
    rng = random.Random(seed)
    scene = generate_scene(12 + 2 * seed, 1 + seed % 3, POLYGONAL, seed=seed + 40)
    vis = VisibilityIndex(scene)
    pts = [v for p in scene.obstacles for v in p.vertices]
    tree = build_cutline_tree(pts, X_AXIS)
    x0, y0, x1, y1 = scene.bbox
    for _ in range(60):
        q = Point(rng.randint(x0, x1), rng.randint(y0, y1))
        if vis.locate(q)[0] == "interior":
            continue
        proj = projection_cutlines(q, tree, vis)
        rel = relevant_projection_cutlines(q, tree, vis)
        assert set(rel) <= set(proj)
        assert len(rel) <= 2 * tree.super_levels
        # per side, level numbers decrease with distance from q
        for side_sign in (1, -1):
            lines = [
                (abs(tree.node(i).coord - q.x), tree.node(i).level)
                for i in proj
                if (tree.node(i).coord - q.x) * side_sign > 0
            ]
            lines.sort()
            levels = [lv for _, lv in lines]
            assert levels == sorted(levels, reverse=True), (q, lines)
