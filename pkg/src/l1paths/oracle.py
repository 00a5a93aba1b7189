"""Brute-force shortest-path oracles.

These are deliberately simple quadratic/cubic constructions, independent
of the engine's graph builders, and exact.  The unweighted oracle runs
Dijkstra over the full visibility graph of the obstacle vertices; the
weighted oracle runs Dijkstra over a Hanan grid refined enough to carry
an optimal weighted rectilinear path, with an empirical
refinement-stability guard.

numpy is used only as a vectorized sign filter for segment disjointness,
and only when all coordinates are small enough that int64 intermediates
are exact; every undecided case falls back to exact rational arithmetic.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

try:
    import numpy as _np
except Exception:  # pragma: no cover
    _np = None

from .errors import EngineError, POINT_INSIDE_OBSTACLE
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
    segments_intersect,
)
from .scene import RECTILINEAR_WEIGHTED, Scene

_NUMPY_COORD_LIMIT = 1 << 29  # int64 stays exact for cross products below this


@dataclass(frozen=True)
class OraclePath:
    length: object  # int | Fraction | math.inf
    polyline: Tuple[Point, ...]


def _require_free(scene: Scene, p: Point):
    x0, y0, x1, y1 = scene.bbox
    if not (x0 <= p.x <= x1 and y0 <= p.y <= y1):
        raise EngineError("OUT_OF_BBOX", f"{p} outside bbox")
    for oi, poly in enumerate(scene.obstacles):
        if point_in_polygon(p, poly) == INTERIOR:
            raise EngineError(POINT_INSIDE_OBSTACLE, f"{p} inside obstacle {oi}")


def _segment_param(a: Point, b: Point, p: Point) -> Fraction:
    if a.x != b.x:
        return Fraction(p.x - a.x, b.x - a.x)
    return Fraction(p.y - a.y, b.y - a.y)


def _blocked_exact(a: Point, b: Point, poly: Polygon) -> bool:
    """Does the open segment (a, b) intersect the polygon interior?

    Gathers every boundary contact parameter and tests the midpoint of
    each contact-free gap; exact for all touch and overlap cases."""
    seg = Segment(a, b)
    params = {Fraction(0), Fraction(1)}
    for e in poly.edges():
        hit = segments_intersect(seg, e)
        if hit is None:
            continue
        if isinstance(hit, Segment):
            params.add(_segment_param(a, b, hit.a))
            params.add(_segment_param(a, b, hit.b))
        else:
            params.add(_segment_param(a, b, hit))
    ts = sorted(t for t in params if 0 <= t <= 1)
    for t1, t2 in zip(ts, ts[1:]):
        tm = (t1 + t2) / 2
        m = Point(a.x + tm * (b.x - a.x), a.y + tm * (b.y - a.y))
        if point_in_polygon(m, poly) == INTERIOR:
            return True
    return False


def segment_free(scene: Scene, a: Point, b: Point) -> bool:
    """Open segment (a, b) avoids every obstacle interior (exact)."""
    if a == b:
        return True
    sx0, sx1 = min(a.x, b.x), max(a.x, b.x)
    sy0, sy1 = min(a.y, b.y), max(a.y, b.y)
    for poly in scene.obstacles:
        bx0, by0, bx1, by1 = poly.bounding_box()
        if sx1 < bx0 or bx1 < sx0 or sy1 < by0 or by1 < sy0:
            continue
        if _blocked_exact(a, b, poly):
            return False
    return True


def path_length(polyline: Sequence[Point]):
    return sum(l1_length(polyline[i], polyline[i + 1]) for i in range(len(polyline) - 1))


class _ObstacleArrays:
    """Per-obstacle numpy edge arrays for the vectorized sign filter."""

    def __init__(self, poly: Polygon):
        self.poly = poly
        self.bbox = poly.bounding_box()
        if _np is not None:
            verts = poly.vertices
            k = len(verts)
            self.x1 = _np.array([verts[j].x for j in range(k)], dtype=_np.int64)
            self.y1 = _np.array([verts[j].y for j in range(k)], dtype=_np.int64)
            self.x2 = _np.array([verts[(j + 1) % k].x for j in range(k)], dtype=_np.int64)
            self.y2 = _np.array([verts[(j + 1) % k].y for j in range(k)], dtype=_np.int64)


class UnweightedOracle:
    """Visibility-graph Dijkstra over obstacle vertices plus query points.

    Any taut L1 path bends only at obstacle vertices, and straightening
    a subpath onto a free segment never increases L1 length, so the
    visibility graph carries an optimal path.
    """

    def __init__(self, scene: Scene):
        self.scene = scene
        self.verts: List[Point] = [v for poly in scene.obstacles for v in poly.vertices]
        self._arrays = [_ObstacleArrays(p) for p in scene.obstacles]
        x0, y0, x1, y1 = scene.bbox
        self._use_numpy = _np is not None and max(
            abs(x0), abs(y0), abs(x1), abs(y1)
        ) < _NUMPY_COORD_LIMIT
        m = len(self.verts)
        self.adj: List[List[Tuple[int, int]]] = [[] for _ in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                if self.visible(self.verts[i], self.verts[j]):
                    d = l1_length(self.verts[i], self.verts[j])
                    self.adj[i].append((j, d))
                    self.adj[j].append((i, d))

    def visible(self, a: Point, b: Point) -> bool:
        if a == b:
            return True
        rational = not (isinstance(a.x, int) and isinstance(a.y, int)
                        and isinstance(b.x, int) and isinstance(b.y, int))
        sx0, sx1 = (a.x, b.x) if a.x <= b.x else (b.x, a.x)
        sy0, sy1 = (a.y, b.y) if a.y <= b.y else (b.y, a.y)
        for arr in self._arrays:
            bx0, by0, bx1, by1 = arr.bbox
            if sx1 < bx0 or bx1 < sx0 or sy1 < by0 or by1 < sy0:
                continue
            if not self._use_numpy or rational:
                if _blocked_exact(a, b, arr.poly):
                    return False
                continue
            dxs, dys = b.x - a.x, b.y - a.y
            d1 = dxs * (arr.y1 - a.y) - dys * (arr.x1 - a.x)
            d2 = dxs * (arr.y2 - a.y) - dys * (arr.x2 - a.x)
            ex, ey = arr.x2 - arr.x1, arr.y2 - arr.y1
            d3 = ex * (a.y - arr.y1) - ey * (a.x - arr.x1)
            d4 = ex * (b.y - arr.y1) - ey * (b.x - arr.x1)
            proper = ((d1 > 0) != (d2 > 0)) & (d1 != 0) & (d2 != 0) & \
                     ((d3 > 0) != (d4 > 0)) & (d3 != 0) & (d4 != 0)
            if proper.any():
                return False
            separated = ((d1 > 0) & (d2 > 0)) | ((d1 < 0) & (d2 < 0)) | \
                        ((d3 > 0) & (d4 > 0)) | ((d3 < 0) & (d4 < 0))
            if separated.all():
                continue
            undecided = _np.nonzero(~separated)[0]
            seg = Segment(a, b)
            poly = arr.poly
            verts = poly.vertices
            k = len(verts)
            endpoint_only = True
            for j in undecided:
                e = Segment(verts[j], verts[(j + 1) % k])
                hit = segments_intersect(seg, e)
                if hit is None:
                    continue
                if isinstance(hit, Segment) or (hit != a and hit != b):
                    endpoint_only = False
                    break
            if endpoint_only:
                # no contact strictly inside the open segment: one side test
                mid = Point(Fraction(a.x + b.x, 2), Fraction(a.y + b.y, 2))
                if point_in_polygon(mid, poly) == INTERIOR:
                    return False
            else:
                if _blocked_exact(a, b, poly):
                    return False
        return True

    def vertex_distances(self, i: int) -> Dict[int, object]:
        """Shortest distances from obstacle vertex i to all obstacle
        vertices, over the cached visibility graph."""
        dist = {i: 0}
        heap = [(0, i)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v, w in self.adj[u]:
                nd = d + w
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        return dist

    def query(self, s: Point, t: Point) -> OraclePath:
        _require_free(self.scene, s)
        _require_free(self.scene, t)
        if s == t:
            return OraclePath(length=0, polyline=(s,))
        nodes = self.verts + [s, t]
        m = len(self.verts)
        si, ti = m, m + 1
        extra: Dict[int, List[Tuple[int, int]]] = {si: [], ti: []}
        for i, v in enumerate(self.verts):
            if self.visible(s, v):
                extra[si].append((i, l1_length(s, v)))
            if self.visible(t, v):
                extra[ti].append((i, l1_length(t, v)))
        if self.visible(s, t):
            extra[si].append((ti, l1_length(s, t)))

        dist = {si: 0}
        pred = {si: None}
        heap = [(0, si)]
        seen = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in seen:
                continue
            seen.add(u)
            if u == ti:
                break
            neighbors = list(self.adj[u]) if u < m else []
            neighbors += extra.get(u, [])
            if u < m and self.visible(self.verts[u], t):
                neighbors.append((ti, l1_length(self.verts[u], t)))
            for v, w in neighbors:
                nd = d + w
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    pred[v] = u
                    heapq.heappush(heap, (nd, v))
        if ti not in seen:
            raise AssertionError("free space should be connected")
        chain = []
        cur: Optional[int] = ti
        while cur is not None:
            chain.append(nodes[cur])
            cur = pred[cur]
        chain.reverse()
        return OraclePath(length=dist[ti], polyline=tuple(chain))


def _internal_projection_points(scene: Scene) -> List[Point]:
    """Independent reimplementation of reflex-vertex edge extensions."""
    out: List[Point] = []
    for poly in scene.obstacles:
        verts = poly.vertices
        k = len(verts)
        for j in range(k):
            u, v, w = verts[(j - 1) % k], verts[j], verts[(j + 1) % k]
            if orientation(u, v, w) != -1:
                continue
            for src in (u, w):
                dx = 0 if v.x == src.x else (1 if v.x > src.x else -1)
                dy = 0 if v.y == src.y else (1 if v.y > src.y else -1)
                best = None
                for a, b in poly.edges():
                    cands = []
                    if dx != 0:
                        if a.y == b.y == v.y:
                            cands = [a, b]
                        elif a.x == b.x and min(a.y, b.y) <= v.y <= max(a.y, b.y):
                            cands = [Point(a.x, v.y)]
                    else:
                        if a.x == b.x == v.x:
                            cands = [a, b]
                        elif a.y == b.y and min(a.x, b.x) <= v.x <= max(a.x, b.x):
                            cands = [Point(v.x, a.y)]
                    for c in cands:
                        lam = (c.x - v.x) * dx + (c.y - v.y) * dy
                        if lam > 0 and (best is None or lam < best[0]):
                            best = (lam, c)
                if best is not None:
                    out.append(best[1])
    return out


class WeightedOracle:
    """Hanan-grid Dijkstra for weighted rectilinear scenes.

    The grid runs through all obstacle vertices and internal projections
    of reflex vertices (plus the query points), so every edge piece lies
    entirely inside one region; each piece is priced by membership of its
    midpoint.  `refine=True` inserts the midpoint of every grid interval,
    which must not change any distance (stability guard).
    """

    def __init__(self, scene: Scene, refine: bool = False,
                 extra_coords: Sequence[Point] = ()):
        if scene.mode != RECTILINEAR_WEIGHTED:
            raise EngineError("WRONG_MODE", "weighted oracle needs a rectilinear weighted scene")
        self.scene = scene
        self.refine = refine
        xs = {v.x for v in scene.all_vertices()}
        ys = {v.y for v in scene.all_vertices()}
        for p in _internal_projection_points(scene):
            xs.add(p.x)
            ys.add(p.y)
        for p in extra_coords:
            xs.add(p.x)
            ys.add(p.y)
        x0, y0, x1, y1 = scene.bbox
        xs |= {x0, x1}
        ys |= {y0, y1}
        self.base_xs = sorted(xs)
        self.base_ys = sorted(ys)
        denoms = [1]
        for w in scene.weights:
            if w != INFINITE:
                denoms.append(Fraction(w).denominator)
        self.scale = 2 * math.lcm(*denoms)

    def _coords(self, vals: List, extra: List) -> List:
        out = set(vals) | set(extra)
        if self.refine:
            s = sorted(out)
            for a, b in zip(s, s[1:]):
                out.add(norm_coord(Fraction(a + b, 2)))
        return sorted(out)

    def _piece_rate(self, m: Point):
        """Scaled cost multiplier of the region containing midpoint m."""
        for oi, poly in enumerate(self.scene.obstacles):
            bx0, by0, bx1, by1 = poly.bounding_box()
            if not (bx0 <= m.x <= bx1 and by0 <= m.y <= by1):
                continue
            if point_in_polygon(m, poly) == INTERIOR:
                w = self.scene.weights[oi]
                if w == INFINITE:
                    return None
                return self.scale * (1 + Fraction(w))
        return self.scale

    def query(self, s: Point, t: Point) -> OraclePath:
        _require_free(self.scene, s)
        _require_free(self.scene, t)
        if s == t:
            return OraclePath(length=0, polyline=(s,))
        xs = self._coords(self.base_xs, [s.x, t.x])
        ys = self._coords(self.base_ys, [s.y, t.y])
        xi = {x: i for i, x in enumerate(xs)}
        yi = {y: i for i, y in enumerate(ys)}
        nx, ny = len(xs), len(ys)

        def nid(i, j):
            return i * ny + j

        # horizontal edge costs: between (i,j) and (i+1,j)
        hcost = [[None] * ny for _ in range(nx - 1)]
        for i in range(nx - 1):
            seg_len = xs[i + 1] - xs[i]
            mx = Fraction(xs[i] + xs[i + 1], 2)
            for j in range(ny):
                rate = self._piece_rate(Point(mx, ys[j]))
                if rate is not None:
                    hcost[i][j] = norm_coord(rate * seg_len)
        vcost = [[None] * (ny - 1) for _ in range(nx)]
        for i in range(nx):
            for j in range(ny - 1):
                my = Fraction(ys[j] + ys[j + 1], 2)
                rate = self._piece_rate(Point(xs[i], my))
                if rate is not None:
                    vcost[i][j] = norm_coord(rate * (ys[j + 1] - ys[j]))

        start = nid(xi[s.x], yi[s.y])
        goal = nid(xi[t.x], yi[t.y])
        dist = {start: 0}
        pred: Dict[int, Optional[int]] = {start: None}
        heap = [(0, start)]
        seen = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in seen:
                continue
            seen.add(u)
            if u == goal:
                break
            i, j = divmod(u, ny)
            moves = []
            if i + 1 < nx and hcost[i][j] is not None:
                moves.append((nid(i + 1, j), hcost[i][j]))
            if i > 0 and hcost[i - 1][j] is not None:
                moves.append((nid(i - 1, j), hcost[i - 1][j]))
            if j + 1 < ny and vcost[i][j] is not None:
                moves.append((nid(i, j + 1), vcost[i][j]))
            if j > 0 and vcost[i][j - 1] is not None:
                moves.append((nid(i, j - 1), vcost[i][j - 1]))
            for v, w in moves:
                nd = d + w
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    pred[v] = u
                    heapq.heappush(heap, (nd, v))
        if goal not in seen:
            raise AssertionError("weighted free space should be connected")

        chain = []
        cur: Optional[int] = goal
        while cur is not None:
            i, j = divmod(cur, ny)
            chain.append(Point(norm_coord(xs[i]), norm_coord(ys[j])))
            cur = pred[cur]
        chain.reverse()
        # drop collinear intermediate grid points
        out = [chain[0]]
        for idx in range(1, len(chain) - 1):
            a, b, c = out[-1], chain[idx], chain[idx + 1]
            if (a.x == b.x == c.x) or (a.y == b.y == c.y):
                continue
            out.append(b)
        if len(chain) > 1:
            out.append(chain[-1])
        return OraclePath(length=norm_coord(Fraction(dist[goal], self.scale)),
                          polyline=tuple(out))


_unweighted_cache: Dict[Scene, UnweightedOracle] = {}
_weighted_cache: Dict[Tuple[Scene, bool], WeightedOracle] = {}


def oracle_unweighted(scene: Scene, s: Point, t: Point) -> OraclePath:
    oracle = _unweighted_cache.get(scene)
    if oracle is None:
        oracle = _unweighted_cache[scene] = UnweightedOracle(scene)
    return oracle.query(s, t)


def oracle_weighted(scene: Scene, s: Point, t: Point, refine: bool = False) -> OraclePath:
    key = (scene, refine)
    oracle = _weighted_cache.get(key)
    if oracle is None:
        oracle = _weighted_cache[key] = WeightedOracle(scene, refine=refine)
    return oracle.query(s, t)
