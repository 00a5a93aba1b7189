"""Per-query gateway sets, fractional cascading, trivial path detection.

A query point q gets a small set of graph nodes (gateways) such that
whenever some shortest path from q to an obstacle vertex exists, one
runs through a gateway.  Two flavors:

  * boundary gateways: the graph nodes adjacent to each of q's four
    boundary projections along the hosting obstacle edge;
  * track gateways: on each projection cut-line (basic variant) or each
    relevant projection cut-line (enhanced variant), the Steiner point
    immediately above and below q's height, kept only when vertically
    visible from q's projection (decided by the point's precomputed
    free span, never by fresh ray shooting).

The cut-line searches run either through a fractional cascading
structure over the tree's sorted point lists (one root search, O(1)
per level) or through plain per-list bisection; both must agree and the
slow path ships as the differential baseline.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .cutline import CutLineTree, projection_cutlines, relevant_projection_cutlines
from .geometry import Point, Segment, l1_length, segments_intersect
from .graph_build import ENHANCED, PathGraph, _edge_sort_key
from .scene import Scene
from .visibility import D, L, R, U, RayHit, VisibilityIndex


@dataclass(frozen=True)
class GatewayEntry:
    node: int
    length: object
    polyline: Tuple[Point, ...]
    origin: str  # "boundary" or "track"


@dataclass
class GatewaySet:
    source: Point
    entries: List[GatewayEntry]

    def best_by_node(self) -> Dict[int, GatewayEntry]:
        out: Dict[int, GatewayEntry] = {}
        for e in self.entries:
            cur = out.get(e.node)
            if cur is None or e.length < cur.length:
                out[e.node] = e
        return out


def steiner_keys(tree: CutLineTree, graph: PathGraph) -> Dict[int, List]:
    """Per tree node, the sorted cross-axis coordinates of its Steiner
    points in the graph."""
    out: Dict[int, List] = {}
    for tid in range(len(tree.nodes)):
        ids = graph.cutline_nodes.get(tid, [])
        out[tid] = [tree.cross_coord(graph.nodes[i].location) for i in ids]
    return out


class FractionalCascade:
    """Augmented sorted lists per tree node with bridges to the children.

    Every second element of a child's augmented list is promoted into the
    parent's, so one binary search at the root plus constant-time bridge
    hops locate the insertion position in every list down a root-leaf
    path."""

    def __init__(self, tree: CutLineTree, keys: Dict[int, List]):
        self.tree = tree
        self.keys = {tid: list(keys.get(tid, [])) for tid in range(len(tree.nodes))}
        self.m_keys: Dict[int, List] = {}
        self.m_own: Dict[int, List[int]] = {}
        self.m_left: Dict[int, List[int]] = {}
        self.m_right: Dict[int, List[int]] = {}
        self._build(tree.root)

    def _build(self, tid: Optional[int]):
        if tid is None:
            return
        node = self.tree.node(tid)
        self._build(node.left)
        self._build(node.right)
        own = self.keys[tid]
        merged = list(own)
        for cid in (node.left, node.right):
            if cid is not None:
                merged.extend(self.m_keys[cid][1::2])
        merged.sort()
        self.m_keys[tid] = merged
        self.m_own[tid] = [bisect.bisect_right(own, k) for k in merged]
        for attr, cid in (("m_left", node.left), ("m_right", node.right)):
            table = getattr(self, attr)
            if cid is None:
                table[tid] = []
            else:
                ck = self.m_keys[cid]
                table[tid] = [bisect.bisect_right(ck, k) for k in merged]

    def path_positions(self, path: Sequence[int], y) -> Dict[int, int]:
        """bisect_right position of y in each node's own list along a
        root-leaf path, using one root search and bridge hops."""
        out: Dict[int, int] = {}
        if not path:
            return out
        tid = path[0]
        pos = bisect.bisect_right(self.m_keys[tid], y)
        for step, tid in enumerate(path):
            mk = self.m_keys[tid]
            # local repair: bridges are exact for the stored key, off by
            # O(1) for the query key
            while pos < len(mk) and mk[pos] <= y:
                pos += 1
            while pos > 0 and mk[pos - 1] > y:
                pos -= 1
            out[tid] = self.m_own[tid][pos - 1] if pos > 0 else 0
            if step + 1 < len(path):
                nxt = path[step + 1]
                node = self.tree.node(tid)
                bridge = self.m_left[tid] if nxt == node.left else self.m_right[tid]
                pos = bridge[pos - 1] if pos > 0 else 0
        return out


def naive_path_positions(graph_keys: Dict[int, List], path: Sequence[int], y) -> Dict[int, int]:
    return {tid: bisect.bisect_right(graph_keys[tid], y) for tid in path}


def _boundary_gateways(
    q: Point, scene: Scene, vis: VisibilityIndex, graph: PathGraph
) -> List[GatewayEntry]:
    out: List[GatewayEntry] = []
    for d in (L, R, U, D):
        hit = vis.ray_shoot(q, d)
        if hit.on_bbox:
            continue
        proj = hit.point
        base = l1_length(q, proj)
        if hit.vertex is not None:
            vloc = scene.obstacles[hit.vertex[0]].vertices[hit.vertex[1]]
            nid = graph.node_at[vloc]
            poly = (q, proj) if proj == vloc else (q, proj, vloc)
            out.append(GatewayEntry(nid, base + l1_length(proj, vloc), _clean(poly), "boundary"))
            continue
        chain = graph.edge_chains.get(hit.edge, [])
        if not chain:
            continue
        keys = [_edge_sort_key(scene, hit.edge, graph.nodes[i].location) for i in chain]
        k = _edge_sort_key(scene, hit.edge, proj)
        pos = bisect.bisect_left(keys, k)
        if pos < len(keys) and keys[pos] == k:
            nid = chain[pos]
            out.append(GatewayEntry(nid, base, _clean((q, proj)), "boundary"))
            continue
        for nid in ([chain[pos - 1]] if pos > 0 else []) + ([chain[pos]] if pos < len(chain) else []):
            nloc = graph.nodes[nid].location
            out.append(
                GatewayEntry(nid, base + l1_length(proj, nloc), _clean((q, proj, nloc)), "boundary")
            )
    return out


def _clean(polyline: Tuple[Point, ...]) -> Tuple[Point, ...]:
    out = [polyline[0]]
    for p in polyline[1:]:
        if p != out[-1]:
            out.append(p)
    return tuple(out)


def compute_gateways(
    q: Point,
    scene: Scene,
    tree: CutLineTree,
    vis: VisibilityIndex,
    graph: PathGraph,
    cascade: Optional[FractionalCascade] = None,
    use_cascade: bool = True,
) -> GatewaySet:
    """Gateway set of q for the graph's variant.

    Track gateways use the relevant projection cut-lines in the enhanced
    variant and all projection cut-lines in the basic one."""
    vis.require_free(q)
    entries = _boundary_gateways(q, scene, vis, graph)

    if graph.variant == ENHANCED:
        lines = relevant_projection_cutlines(q, tree, vis)
    else:
        lines = projection_cutlines(q, tree, vis)

    if use_cascade and cascade is not None:
        # positions over the full root-leaf path; the selected lines are on it
        path = []
        nid: Optional[int] = tree.root
        qc = tree.split_coord(q)
        while nid is not None:
            path.append(nid)
            node = tree.node(nid)
            nid = node.left if qc <= node.coord else node.right
        positions = cascade.path_positions(path, q.y)
    else:
        keys = {tid: [graph.nodes[i].location.y for i in graph.cutline_nodes.get(tid, [])]
                for tid in lines}
        positions = naive_path_positions(keys, lines, q.y)

    qy = q.y
    for tid in lines:
        ids = graph.cutline_nodes.get(tid, [])
        if not ids:
            continue
        node = tree.node(tid)
        q_h = tree.line_point(node, q)
        base = l1_length(q, q_h)
        pos = positions[tid]
        # a point exactly at q's height serves as both neighbors
        tie = pos > 0 and graph.nodes[ids[pos - 1]].location.y == qy
        cands = []
        if pos > 0:
            cands.append(ids[pos - 1])
        if not tie and pos < len(ids):
            cands.append(ids[pos])
        for nid2 in cands:
            g = graph.nodes[nid2]
            gy = g.location.y
            if gy >= qy:
                visible = graph.down_bound[nid2] <= qy
            else:
                visible = graph.up_bound[nid2] >= qy
            if not visible:
                continue
            entries.append(
                GatewayEntry(
                    nid2,
                    base + abs(gy - qy),
                    _clean((q, q_h, g.location)),
                    "track",
                )
            )
    return GatewaySet(source=q, entries=entries)


def detect_trivial_path(s: Point, t: Point, vis: VisibilityIndex):
    """Shortest 2- or 3-segment candidate built from the boundary
    projections of s and t: either two projection segments cross, or two
    projections land on the same obstacle edge (or frame side).  Returns
    (length, polyline) or None."""
    if s == t:
        return (0, (s,))
    s_pr = vis.projections(s)
    t_pr = vis.projections(t)

    def host(hit: RayHit):
        if hit.on_bbox:
            p = hit.point
            x0, y0, x1, y1 = vis.scene.bbox
            if p.x == x0:
                return ("bbox", "W")
            if p.x == x1:
                return ("bbox", "E")
            if p.y == y0:
                return ("bbox", "S")
            return ("bbox", "N")
        return hit.edge

    best = None

    def offer(length, polyline):
        nonlocal best
        if best is None or length < best[0]:
            best = (length, _clean(tuple(polyline)))

    for hs in s_pr.values():
        seg_s = Segment(s, hs.point)
        for ht in t_pr.values():
            seg_t = Segment(t, ht.point)
            hit = segments_intersect(seg_s, seg_t)
            if hit is not None:
                pts = (hit.a, hit.b) if isinstance(hit, Segment) else (hit,)
                for x in pts:
                    offer(l1_length(s, x) + l1_length(x, t), [s, x, t])
            if host(hs) == host(ht):
                p1, p2 = hs.point, ht.point
                offer(
                    l1_length(s, p1) + l1_length(p1, p2) + l1_length(p2, t),
                    [s, p1, p2, t],
                )
    return best
