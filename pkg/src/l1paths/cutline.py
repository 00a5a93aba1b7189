"""Cut-line trees: recursive median subdivision of a point set.

Each node carries a cut-line through the lower-median coordinate of its
member points; children receive the members strictly left/right of the
line, so points on the line (the median, plus any ties in weighted
scenes) stop at that node.  Levels are grouped into super-levels of
ceil(sqrt(depth)) consecutive levels; those drive where the dense graph
replicates Steiner points and how many gateways a query needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import EMPTY_POINT_SET, EngineError
from .geometry import Point
from .visibility import VisibilityIndex, L, R, U, D

X_AXIS = "x"  # vertical cut-lines, split by x
Y_AXIS = "y"  # horizontal cut-lines, split by y


@dataclass
class CutNode:
    node_id: int
    coord: int               # cut-line coordinate along the split axis
    members: Tuple[int, ...]  # indices into the tree's point list
    level: int               # root has level 1
    left: Optional[int] = None
    right: Optional[int] = None
    super_level: int = 0


@dataclass
class CutLineTree:
    axis: str
    points: Tuple[Point, ...]
    nodes: List[CutNode] = field(default_factory=list)
    root: Optional[int] = None
    depth: int = 0
    super_level_size: int = 1
    super_levels: int = 0

    def node(self, node_id: int) -> CutNode:
        return self.nodes[node_id]

    def split_coord(self, p: Point):
        return p.x if self.axis == X_AXIS else p.y

    def cross_coord(self, p: Point):
        return p.y if self.axis == X_AXIS else p.x

    def line_point(self, node: CutNode, p: Point) -> Point:
        """Projection of p onto the node's cut-line."""
        if self.axis == X_AXIS:
            return Point(node.coord, p.y)
        return Point(p.x, node.coord)

    def super_top_nodes(self) -> List[int]:
        """Nodes at the first level of their super-level."""
        return [
            n.node_id
            for n in self.nodes
            if (n.level - 1) % self.super_level_size == 0
        ]

    def subtree_within_super_level(self, top: int) -> List[int]:
        """Subtree of `top` truncated to `top`'s super-level, in-order
        (cut-lines left to right)."""
        sl = self.nodes[top].super_level
        out: List[int] = []

        def rec(nid: Optional[int]):
            if nid is None:
                return
            node = self.nodes[nid]
            if node.super_level != sl:
                return
            rec(node.left)
            out.append(nid)
            rec(node.right)

        rec(top)
        return out


def empty_tree(axis: str = X_AXIS) -> CutLineTree:
    """Degenerate tree for scenes without obstacles: no cut-lines."""
    return CutLineTree(axis=axis, points=())


def build_cutline_tree(points: Sequence[Point], axis: str = X_AXIS) -> CutLineTree:
    pts = tuple(points)
    if not pts:
        raise EngineError(EMPTY_POINT_SET, "cut-line tree needs at least one point")
    tree = CutLineTree(axis=axis, points=pts)
    key = (lambda i: (pts[i].x, pts[i].y, i)) if axis == X_AXIS else (lambda i: (pts[i].y, pts[i].x, i))
    coord = (lambda i: pts[i].x) if axis == X_AXIS else (lambda i: pts[i].y)
    order = sorted(range(len(pts)), key=key)

    def rec(idxs: List[int], level: int) -> int:
        median = idxs[(len(idxs) - 1) // 2]
        c = coord(median)
        nid = len(tree.nodes)
        tree.nodes.append(CutNode(node_id=nid, coord=c, members=tuple(idxs), level=level))
        left = [i for i in idxs if coord(i) < c]
        right = [i for i in idxs if coord(i) > c]
        if left:
            tree.nodes[nid].left = rec(left, level + 1)
        if right:
            tree.nodes[nid].right = rec(right, level + 1)
        return nid

    tree.root = rec(order, 1)
    tree.depth = max(n.level for n in tree.nodes)
    tree.super_level_size = max(1, math.ceil(math.sqrt(tree.depth)))
    for n in tree.nodes:
        n.super_level = (n.level - 1) // tree.super_level_size + 1
    tree.super_levels = (tree.depth - 1) // tree.super_level_size + 1
    return tree


def _visible_span(q: Point, vis: VisibilityIndex, axis: str):
    """Closed interval of cut-line coordinates q can reach with an
    axis-perpendicular free segment."""
    if axis == X_AXIS:
        lo = vis.ray_shoot(q, L).point.x
        hi = vis.ray_shoot(q, R).point.x
    else:
        lo = vis.ray_shoot(q, D).point.y
        hi = vis.ray_shoot(q, U).point.y
    return lo, hi


def projection_cutlines(q: Point, tree: CutLineTree, vis: VisibilityIndex) -> List[int]:
    """Nodes on q's root-to-leaf path whose cut-line q can see along the
    split axis.  Root-to-leaf order; descends left on exact ties."""
    lo, hi = _visible_span(q, vis, tree.axis)
    qc = tree.split_coord(q)
    out: List[int] = []
    nid: Optional[int] = tree.root
    while nid is not None:
        node = tree.nodes[nid]
        if lo <= node.coord <= hi:
            out.append(nid)
        nid = node.left if qc <= node.coord else node.right
    return out


def relevant_projection_cutlines(
    q: Point, tree: CutLineTree, vis: VisibilityIndex
) -> List[int]:
    """Per super-level and per side of q, the deepest projection cut-line.

    Lines through q's own coordinate count as the right side, so at most
    two lines per super-level survive."""
    qc = tree.split_coord(q)
    best = {}
    for nid in projection_cutlines(q, tree, vis):
        node = tree.nodes[nid]
        side = "l" if node.coord < qc else "r"
        key = (node.super_level, side)
        cur = best.get(key)
        if cur is None or tree.nodes[cur].level < node.level:
            best[key] = nid
    return sorted(best.values(), key=lambda nid: tree.nodes[nid].level)
