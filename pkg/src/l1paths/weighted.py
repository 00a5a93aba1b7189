"""Weighted rectilinear mode: paths may cross obstacle interiors at a
per-obstacle surcharge.

The node set combines obstacle vertices, interior extensions of reflex
vertices, and the vertices' free-space boundary projections.  Two
cut-line trees (vertical and horizontal) carry Steiner points under the
weighted visibility rule: a point reaches a cut-line if the connecting
segment stays entirely in free space or entirely inside one obstacle.
Consecutive Steiner points on a cut-line are always connected; the edge
cost is the weighted length of the segment.

All internal costs are scaled by a per-scene integer (twice the lcm of
the weight denominators) so Dijkstra runs on plain ints; infinite
weights make edges non-traversable and are tracked as piece counts in
the prefix tables.

A query evaluates two candidate families and returns their minimum:
vertex-free L-shaped paths priced directly, and gateway-graph paths
through the node set for every pairing of the two query fans.  The
result is always the exact cost of a realizable path, and it is optimal
whenever an optimal path touches the node set or is one of the L
candidates.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cutline import (
    CutLineTree,
    X_AXIS,
    Y_AXIS,
    build_cutline_tree,
    relevant_projection_cutlines,
)
from .errors import EngineError, WRONG_MODE
from .gateway import FractionalCascade, GatewayEntry, GatewaySet, _clean
from .geometry import (
    INFINITE,
    INTERIOR,
    Point,
    Polygon,
    Segment,
    l1_length,
    norm_coord,
    on_segment,
    orientation,
    point_in_polygon,
)
from .graph_build import PathGraph
from .query import QueryResult, TRIVIAL, VIA_GATEWAYS
from .scene import RECTILINEAR_WEIGHTED, Scene, SceneStats, validate_scene
from .visibility import (
    D,
    L,
    R,
    U,
    VisibilityIndex,
    _axis_ray_edge_hits,
    _cone_contains,
    internal_projections,
)

V_VERTEX = "vertex"
V_INTERNAL = "internal"
V_PROJECTION = "projection"


@dataclass(frozen=True)
class VPoint:
    location: Point
    origin: str
    obstacle: Optional[int]  # obstacle whose boundary carries the point
    source_vertex: Optional[int] = None  # index into the vertex list


@dataclass
class WeightedNodeSet:
    points: List[VPoint]
    index_at: Dict[Point, int]


def collect_v_set(scene: Scene, vis: Optional[VisibilityIndex] = None) -> WeightedNodeSet:
    """Obstacle vertices, internal projections of reflex vertices, and
    the vertices' four free-space boundary projections, deduplicated."""
    if scene.mode != RECTILINEAR_WEIGHTED:
        raise EngineError(WRONG_MODE, "node set needs a weighted rectilinear scene")
    if vis is None:
        vis = VisibilityIndex(scene)
    points: List[VPoint] = []
    index_at: Dict[Point, int] = {}

    def add(vp: VPoint):
        if vp.location not in index_at:
            index_at[vp.location] = len(points)
            points.append(vp)

    verts: List[Point] = []
    for oi, poly in enumerate(scene.obstacles):
        for v in poly.vertices:
            add(VPoint(v, V_VERTEX, oi))
            verts.append(v)
    for p, (oi, j) in internal_projections(scene):
        src = index_at.get(scene.obstacles[oi].vertices[j])
        add(VPoint(p, V_INTERNAL, oi, source_vertex=src))
    for vi, v in enumerate(verts):
        for d in (L, R, U, D):
            hit = vis.ray_shoot(v, d)
            if hit.point == v:
                continue
            add(VPoint(hit.point, V_PROJECTION,
                       None if hit.on_bbox else hit.obstacle, source_vertex=vi))
    return WeightedNodeSet(points=points, index_at=index_at)


# -- exact weighted pricing --------------------------------------------------


def segment_weighted_length(seg: Segment, scene: Scene):
    """Weighted length of one axis-parallel segment: interior pieces cost
    (1+w) per unit, everything else (free space and boundaries) costs 1.
    Infinite weights absorb unless the interior overlap has zero length."""
    a, b = seg
    if a == b:
        return 0
    if a.x != b.x and a.y != b.y:
        raise ValueError("weighted pricing needs an axis-parallel segment")
    total = l1_length(a, b)
    extra = 0
    for oi, poly in enumerate(scene.obstacles):
        w = scene.weight_of(oi)
        overlap = _interior_overlap(seg, poly)
        if overlap == 0:
            continue
        if w == INFINITE:
            return INFINITE
        extra += w * overlap
    return norm_coord(total + extra if isinstance(extra, int) else Fraction(total) + extra)


def _interior_overlap(seg: Segment, poly: Polygon):
    """Length of seg inside the polygon interior (exact, via piece midpoints)."""
    a, b = seg
    bx0, by0, bx1, by1 = poly.bounding_box()
    sx0, sx1 = min(a.x, b.x), max(a.x, b.x)
    sy0, sy1 = min(a.y, b.y), max(a.y, b.y)
    if sx1 < bx0 or bx1 < sx0 or sy1 < by0 or by1 < sy0:
        return 0
    cuts = {0, 1}
    horizontal = a.y == b.y
    span = (b.x - a.x) if horizontal else (b.y - a.y)
    for e in poly.edges():
        dx = (1 if b.x > a.x else -1) if horizontal else 0
        dy = 0 if horizontal else (1 if b.y > a.y else -1)
        for c in _axis_ray_edge_hits(a, dx, dy, e.a, e.b):
            t = Fraction((c.x - a.x), span) if horizontal else Fraction((c.y - a.y), span)
            if 0 < t < 1:
                cuts.add(t)
    ts = sorted(cuts)
    overlap = 0
    for t1, t2 in zip(ts, ts[1:]):
        tm = (t1 + t2) / 2
        m = Point(a.x + tm * (b.x - a.x), a.y + tm * (b.y - a.y))
        if point_in_polygon(m, poly) == INTERIOR:
            overlap += (t2 - t1) * abs(span)
    return norm_coord(overlap)


class _Pricer:
    """Scaled-integer pricing of axis-parallel segments via the cached
    interior interval structure of each grid line."""

    def __init__(self, scene: Scene, vis: VisibilityIndex, scale: int):
        self.scene = scene
        self.vis = vis
        self.scale = scale
        self.rates: List[Optional[int]] = []
        for oi in range(len(scene.obstacles)):
            w = scene.weight_of(oi)
            self.rates.append(None if w == INFINITE else int(scale * (1 + Fraction(w))))
        self._cache: Dict[Tuple[str, object], List] = {}

    def line_pieces(self, axis: str, coord) -> List[Tuple[object, object, Optional[int]]]:
        key = (axis, coord)
        got = self._cache.get(key)
        if got is None:
            struct = self.vis.vertical if axis == X_AXIS else self.vis.horizontal
            got = [(lo, hi, self.rates[owner])
                   for lo, hi, owner in struct.interior_intervals_at(coord)]
            self._cache[key] = got
        return got

    def price(self, a: Point, b: Point) -> Optional[int]:
        """Scaled weighted length, or None when it is infinite."""
        if a == b:
            return 0
        if a.x == b.x:
            pieces = self.line_pieces(X_AXIS, a.x)
            lo, hi = (a.y, b.y) if a.y <= b.y else (b.y, a.y)
        elif a.y == b.y:
            pieces = self.line_pieces(Y_AXIS, a.y)
            lo, hi = (a.x, b.x) if a.x <= b.x else (b.x, a.x)
        else:
            raise ValueError("weighted pricing needs an axis-parallel segment")
        total = self.scale * (hi - lo)
        for plo, phi, rate in pieces:
            olo, ohi = max(lo, plo), min(hi, phi)
            if olo >= ohi:
                continue
            if rate is None:
                return None
            total += (rate - self.scale) * (ohi - olo)
        return total


# -- weighted visibility spans ------------------------------------------------


def _incidence(poly: Polygon, p: Point):
    """(vertex index, edge index list) of p on the polygon boundary."""
    verts = poly.vertices
    k = len(verts)
    for j, v in enumerate(verts):
        if v == p:
            return j, [(j - 1) % k, j]
    hits = [j for j in range(k) if on_segment(p, Segment(verts[j], verts[(j + 1) % k]))]
    return None, hits


def _enters_interior(poly: Polygon, p: Point, d: Tuple[int, int]) -> bool:
    vj, edges = _incidence(poly, p)
    if vj is not None:
        verts = poly.vertices
        k = len(verts)
        v, w, u = verts[vj], verts[(vj + 1) % k], verts[(vj - 1) % k]
        return _cone_contains((w.x - v.x, w.y - v.y), (u.x - v.x, u.y - v.y), d)
    if not edges:
        return False
    a = poly.vertices[edges[0]]
    b = poly.vertices[(edges[0] + 1) % len(poly.vertices)]
    cross = (b.x - a.x) * d[1] - (b.y - a.y) * d[0]
    return cross > 0  # interior is left of the directed boundary


def _interior_exit(poly: Polygon, p: Point, d: Tuple[int, int]):
    """First boundary point hit when extending from p through the interior."""
    best = None
    for e in poly.edges():
        for c in _axis_ray_edge_hits(p, d[0], d[1], e.a, e.b):
            lam = (c.x - p.x) * d[0] + (c.y - p.y) * d[1]
            if lam > 0 and (best is None or lam < best[0]):
                best = (lam, c)
    return best[1] if best else p


def _weighted_span(vp: VPoint, scene: Scene, vis: VisibilityIndex, axis: str):
    """Closed interval of cut-line coordinates vp can reach with a segment
    lying entirely in free space or entirely inside its obstacle."""
    p = vp.location
    if axis == X_AXIS:
        lo = vis.ray_shoot(p, L).point.x
        hi = vis.ray_shoot(p, R).point.x
        dirs = ((-1, 0), (1, 0))
        pick = lambda q: q.x
    else:
        lo = vis.ray_shoot(p, D).point.y
        hi = vis.ray_shoot(p, U).point.y
        dirs = ((0, -1), (0, 1))
        pick = lambda q: q.y
    if vp.obstacle is not None:
        poly = scene.obstacles[vp.obstacle]
        for d in dirs:
            if _enters_interior(poly, p, d):
                c = pick(_interior_exit(poly, p, d))
                lo = min(lo, c)
                hi = max(hi, c)
    return lo, hi


# -- prefix weight tables ------------------------------------------------------


@dataclass
class LineWeightTable:
    """Piecewise-linear weighted length along one cut-line.

    coords ascend; cum[i] is the scaled finite weighted length from
    coords[0] to coords[i]; cum_inf[i] counts infinitely-weighted pieces
    below coords[i]; rate_above[i] prices the piece starting at
    coords[i] (None marks an infinite piece)."""

    coords: List
    cum: List[int]
    cum_inf: List[int]
    rate_above: List[Optional[int]]

    def _at(self, y) -> Tuple[int, int]:
        j = bisect.bisect_right(self.coords, y) - 1
        if j < 0:
            return 0, 0
        base, binf = self.cum[j], self.cum_inf[j]
        part = y - self.coords[j]
        if part == 0 or j + 1 >= len(self.coords):
            return base, binf
        rate = self.rate_above[j]
        if rate is None:
            return base, binf + 1
        return base + rate * part, binf

    def dw(self, y1, y2) -> Optional[int]:
        """Scaled weighted length between two coordinates; None if infinite."""
        if y1 > y2:
            y1, y2 = y2, y1
        f1, i1 = self._at(y1)
        f2, i2 = self._at(y2)
        if i1 != i2:
            return None
        return f2 - f1


def _build_line_table(pricer: _Pricer, axis: str, coord, steiner_coords: Sequence,
                      bounds: Tuple) -> LineWeightTable:
    pieces = pricer.line_pieces(axis, coord)
    coords = {bounds[0], bounds[1]}
    coords.update(steiner_coords)
    for lo, hi, _rate in pieces:
        coords.add(norm_coord(lo))
        coords.add(norm_coord(hi))
    cs = sorted(coords)
    cum = [0]
    cum_inf = [0]
    rates: List[Optional[int]] = []
    for c1, c2 in zip(cs, cs[1:]):
        mid = Fraction(c1 + c2, 2)
        rate = pricer.scale
        for lo, hi, prate in pieces:
            if lo < mid < hi:
                rate = prate
                break
        rates.append(rate)
        if rate is None:
            cum.append(cum[-1])
            cum_inf.append(cum_inf[-1] + 1)
        else:
            cum.append(cum[-1] + rate * (c2 - c1))
            cum_inf.append(cum_inf[-1])
    rates.append(None)
    return LineWeightTable(coords=cs, cum=cum, cum_inf=cum_inf, rate_above=rates)


# -- the weighted index ---------------------------------------------------------


@dataclass
class WeightedIndex:
    scene: Scene
    stats: SceneStats
    vis: VisibilityIndex
    vset: WeightedNodeSet
    scale: int
    trees: Dict[str, CutLineTree]
    graph: PathGraph  # adjacency costs are scaled ints
    cut_nodes: Dict[str, Dict[int, List[int]]]
    steiner_cascades: Dict[str, FractionalCascade]
    tables: Dict[str, Dict[int, LineWeightTable]]
    pricer: _Pricer
    use_cascade: bool = True


def build_weighted_graph(scene: Scene, vset: WeightedNodeSet,
                         vis: VisibilityIndex, pricer: _Pricer,
                         trees: Dict[str, CutLineTree]) -> Tuple[PathGraph, Dict]:
    g = PathGraph(variant="weighted", scene=scene)
    cut_nodes: Dict[str, Dict[int, List[int]]] = {X_AXIS: {}, Y_AXIS: {}}

    vids = [g.add_node(vp.location, vp.origin, host=vp.obstacle) for vp in vset.points]

    def add_priced_edge(a: int, b: int, pa: Point, pb: Point):
        cost = pricer.price(pa, pb)
        if cost is not None:
            g.add_edge(a, b, cost)

    # connectors: vertex to its projections and internal projections
    for i, vp in enumerate(vset.points):
        if vp.source_vertex is not None:
            j = vp.source_vertex
            add_priced_edge(vids[i], vids[j], vp.location, vset.points[j].location)

    # boundary chains along obstacle edges and the frame
    chains: Dict[object, List[Tuple[Tuple, int]]] = {}
    x0, y0, x1, y1 = scene.bbox
    for i, vp in enumerate(vset.points):
        p = vp.location
        hosts = []
        if vp.obstacle is not None:
            poly = scene.obstacles[vp.obstacle]
            _vj, edges = _incidence(poly, p)
            hosts = [(vp.obstacle, j) for j in edges]
        else:
            if p.x in (x0, x1):
                hosts.append(("bbox", "W" if p.x == x0 else "E"))
            if p.y in (y0, y1):
                hosts.append(("bbox", "S" if p.y == y0 else "N"))
        for h in hosts:
            key = (p.y, p.x) if (h[0] == "bbox" and h[1] in ("W", "E")) else (p.x, p.y)
            chains.setdefault(h, []).append((key, vids[i]))
    for h in sorted(chains, key=repr):
        entries = sorted(set(chains[h]))
        for (_, a), (_, b) in zip(entries, entries[1:]):
            pa, pb = g.nodes[a].location, g.nodes[b].location
            g.add_edge(a, b, pricer.scale * l1_length(pa, pb))  # boundary at free rate

    # Steiner points and chains per tree
    for axis, tree in trees.items():
        spans = {}
        for top in tree.super_top_nodes():
            sub = tree.subtree_within_super_level(top)
            for vi in tree.node(top).members:
                vp = vset.points[vi]
                if vi not in spans:
                    spans[vi] = _weighted_span(vp, scene, vis, axis)
                lo, hi = spans[vi]
                chain: List[Tuple[object, int]] = []
                for tid in sub:
                    node = tree.node(tid)
                    if lo <= node.coord <= hi:
                        loc = tree.line_point(node, vp.location)
                        sid = g.add_node(loc, "steiner", host=(axis, tid), defining_vertex=vi)
                        cut_nodes[axis].setdefault(tid, []).append(sid)
                        chain.append((node.coord, sid))
                if chain:
                    merged = sorted(set(chain) | {(tree.split_coord(vp.location), vids[vi])})
                    for (_, n1), (_, n2) in zip(merged, merged[1:]):
                        add_priced_edge(n1, n2, g.nodes[n1].location, g.nodes[n2].location)

    # cut-line edges between every pair of consecutive Steiner points
    for axis, per_tree in cut_nodes.items():
        tree = trees[axis]
        for tid, ids in sorted(per_tree.items()):
            uniq = sorted(set(ids), key=lambda i: (tree.cross_coord(g.nodes[i].location), i))
            per_tree[tid] = uniq
            for a, b in zip(uniq, uniq[1:]):
                add_priced_edge(a, b, g.nodes[a].location, g.nodes[b].location)
    return g, cut_nodes


def build_weight_prefix_index(
    scene: Scene,
    trees: Dict[str, CutLineTree],
    graph: PathGraph,
    cut_nodes: Dict[str, Dict[int, List[int]]],
    pricer: _Pricer,
) -> Tuple[Dict[str, Dict[int, LineWeightTable]], Dict[str, FractionalCascade]]:
    """Per cut-line prefix weight tables plus cascading structures over
    the per-line Steiner coordinate lists."""
    x0, y0, x1, y1 = scene.bbox
    tables: Dict[str, Dict[int, LineWeightTable]] = {X_AXIS: {}, Y_AXIS: {}}
    cascades: Dict[str, FractionalCascade] = {}
    for axis, tree in trees.items():
        bounds = (y0, y1) if axis == X_AXIS else (x0, x1)
        keys: Dict[int, List] = {}
        for tid in range(len(tree.nodes)):
            ids = cut_nodes[axis].get(tid, [])
            ks = [tree.cross_coord(graph.nodes[i].location) for i in ids]
            keys[tid] = ks
            tables[axis][tid] = _build_line_table(pricer, axis, tree.node(tid).coord, ks, bounds)
        cascades[axis] = FractionalCascade(tree, keys)
    return tables, cascades


def preprocess_weighted(scene: Scene, use_cascade: bool = True) -> WeightedIndex:
    stats = validate_scene(scene)
    if scene.mode != RECTILINEAR_WEIGHTED:
        raise EngineError(WRONG_MODE, "weighted preprocessing needs a weighted scene")
    vis = VisibilityIndex(scene)
    vset = collect_v_set(scene, vis)
    denoms = [1]
    for w in scene.weights:
        if w != INFINITE:
            denoms.append(Fraction(w).denominator)
    scale = 2 * math.lcm(*denoms)
    pricer = _Pricer(scene, vis, scale)
    pts = [vp.location for vp in vset.points]
    trees = {
        X_AXIS: build_cutline_tree(pts, X_AXIS),
        Y_AXIS: build_cutline_tree(pts, Y_AXIS),
    }
    graph, cut_nodes = build_weighted_graph(scene, vset, vis, pricer, trees)
    tables, cascades = build_weight_prefix_index(scene, trees, graph, cut_nodes, pricer)
    return WeightedIndex(
        scene=scene, stats=stats, vis=vis, vset=vset, scale=scale, trees=trees,
        graph=graph, cut_nodes=cut_nodes, steiner_cascades=cascades, tables=tables,
        pricer=pricer, use_cascade=use_cascade,
    )


def weighted_gateways(q: Point, index: WeightedIndex) -> GatewaySet:
    """Up to two gateways per relevant projection cut-line over both
    trees; edge lengths combine the free reach to the line with prefix
    weighted lengths along it.  Lengths are scaled ints."""
    index.vis.require_free(q)
    entries: List[GatewayEntry] = []
    for axis, tree in index.trees.items():
        lines = relevant_projection_cutlines(q, tree, index.vis)
        qc = tree.cross_coord(q)
        if index.use_cascade:
            path = []
            nid = tree.root
            qs = tree.split_coord(q)
            while nid is not None:
                path.append(nid)
                node = tree.node(nid)
                nid = node.left if qs <= node.coord else node.right
            positions = index.steiner_cascades[axis].path_positions(path, qc)
        else:
            positions = {
                tid: bisect.bisect_right(
                    [tree.cross_coord(index.graph.nodes[i].location)
                     for i in index.cut_nodes[axis].get(tid, [])], qc)
                for tid in lines
            }
        for tid in lines:
            ids = index.cut_nodes[axis].get(tid, [])
            if not ids:
                continue
            node = tree.node(tid)
            q_h = tree.line_point(node, q)
            base = index.scale * l1_length(q, q_h)
            table = index.tables[axis][tid]
            pos = positions[tid]
            tie = pos > 0 and tree.cross_coord(index.graph.nodes[ids[pos - 1]].location) == qc
            cands = []
            if pos > 0:
                cands.append(ids[pos - 1])
            if not tie and pos < len(ids):
                cands.append(ids[pos])
            for nid2 in cands:
                g = index.graph.nodes[nid2]
                dw = table.dw(qc, tree.cross_coord(g.location))
                if dw is None:
                    continue
                entries.append(GatewayEntry(nid2, base + dw, _clean((q, q_h, g.location)), "track"))
    return GatewaySet(source=q, entries=entries)


def query_fan(q: Point, vis: VisibilityIndex) -> List[Point]:
    """The point itself plus its four free-space boundary projections."""
    fan = [q]
    for d in (L, R, U, D):
        p = vis.ray_shoot(q, d).point
        if p not in fan:
            fan.append(p)
    return fan


def weighted_query(index: WeightedIndex, s: Point, t: Point, want_path: bool = False) -> QueryResult:
    index.vis.require_free(s)
    index.vis.require_free(t)
    scale = index.scale
    if s == t:
        return QueryResult(length=0, kind=TRIVIAL, path=(s,) if want_path else None)

    best: Optional[Tuple[int, str, Tuple[Point, ...]]] = None

    def offer(cost: int, kind: str, polyline):
        nonlocal best
        if best is None or cost < best[0]:
            best = (cost, kind, _clean(tuple(polyline)))

    # vertex-free candidates: the two L-shaped connections
    for corner in (Point(t.x, s.y), Point(s.x, t.y)):
        c1 = index.pricer.price(s, corner)
        c2 = index.pricer.price(corner, t)
        if c1 is not None and c2 is not None:
            offer(c1 + c2, TRIVIAL, (s, corner, t))

    # gateway-graph candidates over both query fans
    fan_s = query_fan(s, index.vis)
    fan_t = query_fan(t, index.vis)
    seeds: Dict[int, Tuple[int, Point, GatewayEntry]] = {}
    for p in fan_s:
        connector = index.pricer.price(s, p)
        if connector is None:
            continue
        for e in weighted_gateways(p, index).entries:
            cost = connector + e.length
            cur = seeds.get(e.node)
            if cur is None or cost < cur[0]:
                seeds[e.node] = (cost, p, e)
    targets: Dict[int, Tuple[int, Point, GatewayEntry]] = {}
    for q in fan_t:
        connector = index.pricer.price(t, q)
        if connector is None:
            continue
        for e in weighted_gateways(q, index).entries:
            cost = connector + e.length
            cur = targets.get(e.node)
            if cur is None or cost < cur[0]:
                targets[e.node] = (cost, q, e)

    graph = index.graph
    dist: Dict[int, int] = {}
    pred: Dict[int, Optional[int]] = {}
    heap = []
    for nid, (cost, _p, _e) in sorted(seeds.items()):
        if nid not in dist or cost < dist[nid]:
            dist[nid] = cost
            pred[nid] = None
            heapq.heappush(heap, (cost, nid))
    remaining = set(targets)
    seen = set()
    while heap and remaining:
        d_u, u = heapq.heappop(heap)
        if u in seen:
            continue
        seen.add(u)
        remaining.discard(u)
        for v, w in graph.adj[u].items():
            nd = d_u + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))

    gateway_pick = None
    for nid, (tcost, qpt, et) in sorted(targets.items()):
        if nid in seen:
            cand = dist[nid] + tcost
            if gateway_pick is None or cand < gateway_pick[0]:
                gateway_pick = (cand, nid, qpt, et)
    if gateway_pick is not None:
        cand, nid, qpt, et = gateway_pick
        if best is None or cand < best[0]:
            chain = [nid]
            while pred.get(chain[-1]) is not None:
                chain.append(pred[chain[-1]])
            chain.reverse()
            seed_cost, ppt, es = seeds[chain[0]]
            pts: List[Point] = [s, ppt]
            pts.extend(es.polyline)
            for node_id in chain:
                pts.append(graph.nodes[node_id].location)
            pts.extend(reversed(et.polyline))
            pts.append(qpt)
            pts.append(t)
            best = (cand, VIA_GATEWAYS, _clean(tuple(pts)))

    if best is None:
        raise EngineError("NO_PATH", f"no finite-cost path between {s} and {t}")
    cost, kind, polyline = best
    return QueryResult(
        length=norm_coord(Fraction(cost, scale)),
        kind=kind,
        path=polyline if want_path else None,
    )
