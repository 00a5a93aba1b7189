"""Steiner-point track graphs over a polygonal scene.

Two variants share one builder:

  basic    - obstacle vertices, their four boundary projections, and one
             horizontal projection per vertex onto the cut-line of every
             tree node whose member set contains it;
  enhanced - additionally projects each vertex onto every visible
             cut-line of its super-level subtrees, and chains those
             projections left-to-right at the vertex's height.

Edges: vertex-to-projection segments, chains of consecutive graph nodes
along every obstacle edge (and the bbox frame), vertical chains of
mutually visible consecutive Steiner points per cut-line, and the
horizontal super-level chains.  Every edge stores the exact L1 length of
the segment it represents, so graph distances are exact.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .cutline import CutLineTree
from .geometry import Point, l1_length
from .scene import Scene
from .visibility import D, L, R, U, RayHit, VisibilityIndex

VERTEX = "vertex"
TYPE1 = "type1"
TYPE2 = "type2"
TYPE3 = "type3"

BASIC = "basic"
ENHANCED = "enhanced"


@dataclass
class SteinerPoint:
    location: Point
    kind: str
    host: object = None  # (obstacle, edge) | ('bbox', side) | ('cut', tree node id)
    defining_vertex: Optional[int] = None


@dataclass
class PathGraph:
    variant: str
    scene: Optional[Scene] = None
    nodes: List[SteinerPoint] = field(default_factory=list)
    adj: List[Dict[int, object]] = field(default_factory=list)
    node_at: Dict[Point, int] = field(default_factory=dict)
    cutline_nodes: Dict[int, List[int]] = field(default_factory=dict)
    edge_chains: Dict[object, List[int]] = field(default_factory=dict)
    up_bound: Dict[int, object] = field(default_factory=dict)
    down_bound: Dict[int, object] = field(default_factory=dict)

    def add_node(self, loc: Point, kind: str, host=None, defining_vertex=None) -> int:
        nid = self.node_at.get(loc)
        if nid is not None:
            return nid
        nid = len(self.nodes)
        self.nodes.append(SteinerPoint(loc, kind, host, defining_vertex))
        self.adj.append({})
        self.node_at[loc] = nid
        return nid

    def add_edge(self, a: int, b: int, length) -> None:
        if a == b:
            return
        cur = self.adj[a].get(b)
        if cur is None or length < cur:
            self.adj[a][b] = length
            self.adj[b][a] = length

    def edge_count(self) -> int:
        return sum(len(d) for d in self.adj) // 2

    def node_count(self) -> int:
        return len(self.nodes)


def _bbox_side(scene: Scene, p: Point) -> Tuple[str, str]:
    x0, y0, x1, y1 = scene.bbox
    if p.x == x0:
        return ("bbox", "W")
    if p.x == x1:
        return ("bbox", "E")
    if p.y == y0:
        return ("bbox", "S")
    return ("bbox", "N")


def _host_of_hit(scene: Scene, hit: RayHit):
    if hit.on_bbox:
        return _bbox_side(scene, hit.point)
    return hit.edge


def _edge_sort_key(scene: Scene, host, loc: Point):
    if host[0] == "bbox":
        return (loc.x, loc.y) if host[1] in ("S", "N") else (loc.y, loc.x)
    oi, j = host
    verts = scene.obstacles[oi].vertices
    a = verts[j]
    b = verts[(j + 1) % len(verts)]
    if a.x != b.x:
        return (Fraction(loc.x - a.x, b.x - a.x),)
    return (Fraction(loc.y - a.y, b.y - a.y),)


def _sort_indexes(g: PathGraph) -> None:
    for tnode_id, ids in list(g.cutline_nodes.items()):
        g.cutline_nodes[tnode_id] = sorted(
            dict.fromkeys(ids), key=lambda i: (g.nodes[i].location.y, i)
        )
    for host, ids in list(g.edge_chains.items()):
        g.edge_chains[host] = sorted(
            dict.fromkeys(ids),
            key=lambda i: (_edge_sort_key(g.scene, host, g.nodes[i].location), i),
        )


def build_track_graph(
    scene: Scene, tree: CutLineTree, vis: VisibilityIndex, enhanced: bool
) -> PathGraph:
    g = PathGraph(variant=ENHANCED if enhanced else BASIC, scene=scene)
    verts: List[Point] = list(tree.points)

    vert_pos: Dict[Point, Tuple[int, int]] = {}
    for oi, poly in enumerate(scene.obstacles):
        for j, v in enumerate(poly.vertices):
            vert_pos[v] = (oi, j)

    # obstacle vertices; each sits on its two incident boundary edges
    vert_ids: List[int] = []
    for v in verts:
        oi, j = vert_pos[v]
        nid = g.add_node(v, VERTEX, host=(oi, j))
        vert_ids.append(nid)
        k = len(scene.obstacles[oi].vertices)
        g.edge_chains.setdefault((oi, j), []).append(nid)
        g.edge_chains.setdefault((oi, (j - 1) % k), []).append(nid)

    # four boundary projections per vertex; remember the horizontal span
    span_lo: List = []
    span_hi: List = []
    for vi, v in enumerate(verts):
        hits = {d: vis.ray_shoot(v, d) for d in (L, R, U, D)}
        span_lo.append(hits[L].point.x)
        span_hi.append(hits[R].point.x)
        for d, hit in hits.items():
            q = hit.point
            if q == v:
                continue
            host = _host_of_hit(scene, hit)
            qid = g.add_node(q, TYPE1, host=host, defining_vertex=vi)
            g.edge_chains.setdefault(host, []).append(qid)
            g.add_edge(vert_ids[vi], qid, l1_length(v, q))

    # cut-line Steiner points
    chain_sets: List[Tuple[int, List[Tuple[int, int]]]] = []  # (vertex, [(coord, nid)])
    if enhanced:
        for top in tree.super_top_nodes():
            sub = tree.subtree_within_super_level(top)
            for vi in tree.node(top).members:
                v = verts[vi]
                chain: List[Tuple[int, int]] = []
                for tid in sub:
                    node = tree.node(tid)
                    if span_lo[vi] <= node.coord <= span_hi[vi]:
                        loc = tree.line_point(node, v)
                        kind = TYPE2 if vi in node.members else TYPE3
                        sid = g.add_node(loc, kind, host=("cut", tid), defining_vertex=vi)
                        g.cutline_nodes.setdefault(tid, []).append(sid)
                        chain.append((node.coord, sid))
                if chain:
                    chain_sets.append((vi, chain))
    else:
        for node in tree.nodes:
            for vi in node.members:
                v = verts[vi]
                if span_lo[vi] <= node.coord <= span_hi[vi]:
                    loc = tree.line_point(node, v)
                    sid = g.add_node(loc, TYPE2, host=("cut", node.node_id), defining_vertex=vi)
                    g.cutline_nodes.setdefault(node.node_id, []).append(sid)
                    g.add_edge(vert_ids[vi], sid, l1_length(v, loc))

    # horizontal chains across each super-level projection set
    for vi, chain in chain_sets:
        merged = sorted(set(chain) | {(tree.split_coord(verts[vi]), vert_ids[vi])})
        for (c1, n1), (c2, n2) in zip(merged, merged[1:]):
            g.add_edge(n1, n2, abs(c2 - c1))

    _sort_indexes(g)

    # vertical chains per cut-line: consecutive points in the same free gap
    for tid, ids in sorted(g.cutline_nodes.items()):
        coord = tree.node(tid).coord
        endings = [iv[1] for iv in vis.vertical.interior_intervals_at(coord)]
        for a, b in zip(ids, ids[1:]):
            ya = g.nodes[a].location.y
            yb = g.nodes[b].location.y
            if bisect.bisect_right(endings, ya) == bisect.bisect_right(endings, yb):
                g.add_edge(a, b, abs(yb - ya))

    # chains of consecutive graph nodes along obstacle edges and the frame
    for host in sorted(g.edge_chains, key=repr):
        ids = g.edge_chains[host]
        for a, b in zip(ids, ids[1:]):
            g.add_edge(a, b, l1_length(g.nodes[a].location, g.nodes[b].location))

    # vertical free bounds of every cut-line node, for gateway visibility
    for ids in g.cutline_nodes.values():
        for nid in ids:
            if nid in g.up_bound:
                continue
            loc = g.nodes[nid].location
            g.up_bound[nid] = vis.ray_shoot(loc, U).point.y
            g.down_bound[nid] = vis.ray_shoot(loc, D).point.y
    return g


def build_basic_graph(scene: Scene, tree: CutLineTree, vis: VisibilityIndex) -> PathGraph:
    return build_track_graph(scene, tree, vis, enhanced=False)


def build_enhanced_graph(scene: Scene, tree: CutLineTree, vis: VisibilityIndex) -> PathGraph:
    return build_track_graph(scene, tree, vis, enhanced=True)


def dedupe_and_index(g: PathGraph) -> PathGraph:
    """Re-merge coincident nodes and rebuild the sorted host indexes.

    The incremental builder merges by exact location as it goes, so on
    its output this only re-sorts indexes; applying it twice is the
    identity."""
    _sort_indexes(g)
    return g
