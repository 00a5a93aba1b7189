"""Two-point query engine: preprocessing and query evaluation.

Preprocessing builds the visibility index, cut-line tree, track graph,
and cascading search structures.  The all-pairs table policy:

  full      - Dijkstra from every graph node; queries pay two table
              lookups per gateway pair.  Memory grows quadratically, so
              a budget guard rejects large scenes up front.
  on-demand - nothing precomputed; each query runs one multi-source
              Dijkstra seeded with the start point's gateway edges and
              stops when every gateway of the target has settled.

Both policies return identical results; a query always evaluates the
trivial-path candidate and the gateway-graph candidate and takes the
minimum, so detector edge cases can never lose a shorter path.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .cutline import CutLineTree, build_cutline_tree, empty_tree
from .errors import EngineError, INDEX_TOO_LARGE
from .gateway import (
    FractionalCascade,
    GatewaySet,
    compute_gateways,
    detect_trivial_path,
    steiner_keys,
)
from .geometry import Point, l1_length
from .graph_build import (
    BASIC,
    ENHANCED,
    PathGraph,
    build_track_graph,
)
from .scene import Scene, SceneStats, validate_scene
from .visibility import VisibilityIndex

FULL = "full"
ON_DEMAND = "on-demand"

TRIVIAL = "trivial"
VIA_GATEWAYS = "via-gateways"

DEFAULT_BUDGET_BYTES = 2 << 30
_BYTES_PER_TABLE_ENTRY = 90  # python ints in lists, dist plus predecessor


@dataclass(frozen=True)
class QueryResult:
    length: object
    kind: str
    path: Optional[Tuple[Point, ...]] = None


@dataclass
class PreprocessedIndex:
    scene: Scene
    stats: SceneStats
    variant: str
    policy: str
    tree: CutLineTree
    vis: VisibilityIndex
    graph: PathGraph
    cascade: FractionalCascade
    apsp: Optional[Dict[int, List]] = None
    preds: Optional[Dict[int, List[int]]] = None
    use_cascade: bool = True

    def gateways(self, q: Point) -> GatewaySet:
        return compute_gateways(
            q, self.scene, self.tree, self.vis, self.graph, self.cascade,
            use_cascade=self.use_cascade,
        )


def _estimate_full_nodes(stats: SceneStats, variant: str) -> int:
    n = max(stats.n, 1)
    levels = stats.levels + 1
    est = 5 * n + n * levels
    if variant == ENHANCED:
        est += n * stats.super_levels * (1 << math.isqrt(levels - 1) + 1)
    return est


def dijkstra_from(graph: PathGraph, src: int) -> Tuple[List, List[int]]:
    n = graph.node_count()
    dist: List = [None] * n
    pred: List[int] = [-1] * n
    dist[src] = 0
    heap = [(0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in graph.adj[u].items():
            nd = d + w
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, pred


def preprocess(
    scene: Scene,
    variant: str = ENHANCED,
    policy: str = ON_DEMAND,
    budget_bytes: int = DEFAULT_BUDGET_BYTES,
    use_cascade: bool = True,
) -> PreprocessedIndex:
    stats = validate_scene(scene)
    if policy == FULL:
        est = _estimate_full_nodes(stats, variant)
        if est * est * _BYTES_PER_TABLE_ENTRY > budget_bytes:
            raise EngineError(
                INDEX_TOO_LARGE,
                f"full table over ~{est} nodes exceeds {budget_bytes} bytes",
            )
    vis = VisibilityIndex(scene)
    verts = [v for p in scene.obstacles for v in p.vertices]
    tree = build_cutline_tree(verts) if verts else empty_tree()
    graph = build_track_graph(scene, tree, vis, enhanced=(variant == ENHANCED))
    cascade = FractionalCascade(tree, steiner_keys(tree, graph))
    index = PreprocessedIndex(
        scene=scene, stats=stats, variant=variant, policy=policy,
        tree=tree, vis=vis, graph=graph, cascade=cascade, use_cascade=use_cascade,
    )
    if policy == FULL:
        n = graph.node_count()
        if n * n * _BYTES_PER_TABLE_ENTRY > budget_bytes:
            raise EngineError(
                INDEX_TOO_LARGE,
                f"full table over {n} nodes exceeds {budget_bytes} bytes",
            )
        index.apsp = {}
        index.preds = {}
        for src in range(n):
            dist, pred = dijkstra_from(graph, src)
            index.apsp[src] = dist
            index.preds[src] = pred
    return index


def _gateway_branch_full(index: PreprocessedIndex, gs: GatewaySet, gt: GatewaySet):
    best = None
    for es in gs.best_by_node().values():
        row = index.apsp[es.node]
        for et in gt.best_by_node().values():
            mid = row[et.node]
            if mid is None:
                continue
            cand = es.length + mid + et.length
            if best is None or cand < best[0]:
                best = (cand, es, et)
    return best


def _gateway_branch_on_demand(index: PreprocessedIndex, gs: GatewaySet, gt: GatewaySet):
    graph = index.graph
    seeds = gs.best_by_node()
    targets = gt.best_by_node()
    dist: Dict[int, object] = {}
    pred: Dict[int, Optional[int]] = {}
    seed_of: Dict[int, int] = {}
    heap = []
    for e in seeds.values():
        if e.node not in dist or e.length < dist[e.node]:
            dist[e.node] = e.length
            pred[e.node] = None
            seed_of[e.node] = e.node
            heapq.heappush(heap, (e.length, e.node))
    remaining = set(targets)
    seen = set()
    while heap and remaining:
        d, u = heapq.heappop(heap)
        if u in seen:
            continue
        seen.add(u)
        remaining.discard(u)
        for v, w in graph.adj[u].items():
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                seed_of[v] = seed_of[u]
                heapq.heappush(heap, (nd, v))
    best = None
    for et in targets.values():
        if et.node in dist and et.node in seen:
            cand = dist[et.node] + et.length
            if best is None or cand < best[0]:
                best = (cand, seeds[seed_of[et.node]], et, pred)
    return best


def _walk_full_preds(index: PreprocessedIndex, src: int, dst: int) -> List[int]:
    pred = index.preds[src]
    chain = [dst]
    while chain[-1] != src:
        p = pred[chain[-1]]
        if p < 0:
            break
        chain.append(p)
    chain.reverse()
    return chain


def _assemble_path(graph: PathGraph, es, et, node_chain: Sequence[int]) -> Tuple[Point, ...]:
    pts: List[Point] = list(es.polyline)
    for nid in node_chain:
        pts.append(graph.nodes[nid].location)
    pts.extend(reversed(et.polyline))
    out = [pts[0]]
    for p in pts[1:]:
        if p != out[-1]:
            out.append(p)
    return tuple(out)


def query(index: PreprocessedIndex, s: Point, t: Point, want_path: bool = False) -> QueryResult:
    index.vis.require_free(s)
    index.vis.require_free(t)
    if s == t:
        return QueryResult(length=0, kind=TRIVIAL, path=(s,) if want_path else None)

    trivial = detect_trivial_path(s, t, index.vis)
    lower = l1_length(s, t)
    if trivial is not None and trivial[0] == lower:
        return QueryResult(length=trivial[0], kind=TRIVIAL,
                           path=trivial[1] if want_path else None)

    gs = index.gateways(s)
    gt = index.gateways(t)
    if index.policy == FULL:
        got = _gateway_branch_full(index, gs, gt)
        branch = None
        if got is not None:
            branch = (got[0], got[1], got[2], None)
    else:
        branch = _gateway_branch_on_demand(index, gs, gt)

    best_len = None
    use_trivial = False
    if trivial is not None:
        best_len = trivial[0]
        use_trivial = True
    if branch is not None and (best_len is None or branch[0] < best_len):
        best_len = branch[0]
        use_trivial = False
    if best_len is None:
        raise EngineError("NO_PATH", f"no candidate path between {s} and {t}")

    if use_trivial:
        return QueryResult(length=best_len, kind=TRIVIAL,
                           path=trivial[1] if want_path else None)

    length, es, et, pred = branch
    path = None
    if want_path:
        if index.policy == FULL:
            chain = _walk_full_preds(index, es.node, et.node)
        else:
            chain = [et.node]
            while pred.get(chain[-1]) is not None:
                chain.append(pred[chain[-1]])
            chain.reverse()
        path = _assemble_path(index.graph, es, et, chain)
    return QueryResult(length=length, kind=VIA_GATEWAYS, path=path)


def batch_query(index: PreprocessedIndex, pairs: Sequence[Tuple[Point, Point]],
                want_path: bool = False, threads: int = 1) -> List[object]:
    """Element-wise queries; one bad pair never aborts the batch."""

    def run(pair):
        s, t = pair
        try:
            return query(index, s, t, want_path=want_path)
        except EngineError as exc:
            return exc

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, pairs))
    return [run(p) for p in pairs]
