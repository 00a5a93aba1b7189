"""Axis-parallel visibility decompositions and exact ray shooting.

Two trapezoidal decompositions of the free space are built by plane
sweeps: one with vertical extension walls (answers vertical ray shots)
and one with horizontal walls (answers horizontal shots).  Both share
one implementation; the horizontal one runs on the coordinate-swapped
scene, which flips handedness and is accounted for in the interior-side
flags.

Ray semantics (free space is closed, paths may touch boundaries):
  * the hit is the first boundary point of the obstacles (or of the
    bounding box frame) on the ray;
  * a ray starting on a boundary and pointing into the obstacle
    interior hits its own start point;
  * a ray grazing collinearly along boundary edges reports the far
    endpoint of the maximal collinear run.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import EngineError, OUT_OF_BBOX, POINT_INSIDE_OBSTACLE, WRONG_MODE
from .geometry import (
    BOUNDARY,
    INTERIOR,
    RIGHT,
    Point,
    Segment,
    norm_coord,
    on_segment,
    orientation,
)
from .scene import RECTILINEAR_WEIGHTED, Scene

VERTICAL = "vertical"      # vertical extension walls, left-to-right sweep
HORIZONTAL = "horizontal"  # horizontal extension walls, bottom-to-top sweep

# ray directions
L, R, U, D = "L", "R", "U", "D"

_BOTTOM = -1  # sentinel: below the lowest edge of a slab (bbox floor)
_TOP = -2     # sentinel: above the highest edge (bbox ceiling)

FREE = "free"


@dataclass(frozen=True)
class RayHit:
    point: Point
    on_bbox: bool
    obstacle: Optional[int] = None
    edge: Optional[Tuple[int, int]] = None    # (obstacle, edge index) hosting the hit
    vertex: Optional[Tuple[int, int]] = None  # set when the hit is exactly a vertex


@dataclass(frozen=True)
class Cell:
    """One trapezoid of the free space, in structure coordinates."""
    lo: int            # wall coordinate where the cell starts
    hi: int            # wall coordinate where it ends
    below: int         # edge id or _BOTTOM
    above: int         # edge id or _TOP


def _cone_contains(a: Tuple, b: Tuple, d: Tuple) -> bool:
    """Is direction d strictly inside the open cone sweeping CCW from a to b?"""
    ab = a[0] * b[1] - a[1] * b[0]
    ad = a[0] * d[1] - a[1] * d[0]
    db = d[0] * b[1] - d[1] * b[0]
    if ab > 0:
        return ad > 0 and db > 0
    if ab < 0:
        return ad > 0 or db > 0
    return ad > 0


class SlabStructure:
    """Trapezoidal decomposition with extension walls along one axis.

    With transpose=False the walls are vertical (the sweep runs left to
    right over x) and `shoot` answers vertical rays.  With transpose=True
    everything is computed on swapped coordinates, so `shoot` answers
    horizontal rays of the original scene.
    """

    def __init__(self, scene: Scene, transpose: bool = False):
        self.scene = scene
        self.transpose = transpose
        x0, y0, x1, y1 = scene.bbox
        if transpose:
            x0, y0, x1, y1 = y0, x0, y1, x1
        self.sx0, self.sy0, self.sx1, self.sy1 = x0, y0, x1, y1

        # edge tables in structure coordinates
        self.e_ax: List = []
        self.e_ay: List = []
        self.e_bx: List = []
        self.e_by: List = []
        self.e_owner: List[int] = []
        self.e_key: List[Tuple[int, int]] = []
        self.e_interior_above: List[bool] = []  # meaningful for non-vertical edges
        self.e_interior_left: List[bool] = []   # meaningful for vertical edges
        self.vertex_info: Dict[Point, List[int]] = {}

        vertical_edges: Dict[int, List[int]] = {}
        events: Dict[int, List[Tuple[int, int]]] = {}  # x -> [(edge, +1 start / -1 end)]

        for oi, poly in enumerate(scene.obstacles):
            verts = poly.vertices
            k = len(verts)
            for j in range(k):
                a, b = verts[j], verts[(j + 1) % k]
                sa = Point(a.y, a.x) if transpose else a
                sb = Point(b.y, b.x) if transpose else b
                eid = len(self.e_ax)
                self.e_ax.append(sa.x)
                self.e_ay.append(sa.y)
                self.e_bx.append(sb.x)
                self.e_by.append(sb.y)
                self.e_owner.append(oi)
                self.e_key.append((oi, j))
                dx = sb.x - sa.x
                dy = sb.y - sa.y
                # CCW input; transposition reflects, putting the interior on
                # the other side of the travel direction
                if transpose:
                    self.e_interior_above.append(dx < 0)
                    self.e_interior_left.append(dy < 0)
                else:
                    self.e_interior_above.append(dx > 0)
                    self.e_interior_left.append(dy > 0)
                if dx == 0:
                    vertical_edges.setdefault(sa.x, []).append(eid)
                else:
                    lo, hi = (sa.x, sb.x) if sa.x < sb.x else (sb.x, sa.x)
                    events.setdefault(lo, []).append((eid, 1))
                    events.setdefault(hi, []).append((eid, -1))
                for pt in (sa, sb):
                    self.vertex_info.setdefault(pt, []).append(eid)

        self.vertical_at: Dict[int, List[int]] = {
            x: sorted(eids, key=lambda e: min(self.e_ay[e], self.e_by[e]))
            for x, eids in vertical_edges.items()
        }

        bcoords = set(events) | set(vertical_edges) | {x0, x1}
        for pt in self.vertex_info:
            bcoords.add(pt.x)
        self.boundaries: List[int] = sorted(bcoords)

        # sweep: maintain active edges sorted by height inside the current slab
        self.slab_edges: List[Tuple[int, ...]] = []
        active: List[int] = []
        nb = len(self.boundaries)
        for i in range(nb - 1):
            x = self.boundaries[i]
            pending = events.get(x, ())
            for eid, kind in pending:
                if kind < 0:
                    active.remove(eid)
            mid = Fraction(self.boundaries[i] + self.boundaries[i + 1], 2)
            for eid, kind in pending:
                if kind > 0:
                    ym = self._edge_y(eid, mid)
                    lo, hi = 0, len(active)
                    while lo < hi:
                        m = (lo + hi) // 2
                        if self._edge_y(active[m], mid) < ym:
                            lo = m + 1
                        else:
                            hi = m
                    active.insert(lo, eid)
            self.slab_edges.append(tuple(active))

        self._build_cells()

    # -- geometry helpers ------------------------------------------------

    def _edge_y(self, eid: int, x) -> Fraction:
        ax, ay = self.e_ax[eid], self.e_ay[eid]
        dx = self.e_bx[eid] - ax
        dy = self.e_by[eid] - ay
        if dy == 0:
            return ay
        return ay + Fraction((x - ax) * dy, dx)

    def _cmp_edge_y(self, eid: int, x, y) -> int:
        """Sign of (edge height at x) - y, without building Fractions."""
        ax, ay = self.e_ax[eid], self.e_ay[eid]
        dx = self.e_bx[eid] - ax
        dy = self.e_by[eid] - ay
        num = (ay - y) * dx + (x - ax) * dy
        if dx < 0:
            num = -num
        if num > 0:
            return 1
        if num < 0:
            return -1
        return 0

    def _first_above(self, slab: int, x, y) -> int:
        """Index of the first stack edge strictly above y at x."""
        stack = self.slab_edges[slab]
        lo, hi = 0, len(stack)
        while lo < hi:
            m = (lo + hi) // 2
            if self._cmp_edge_y(stack[m], x, y) <= 0:
                lo = m + 1
            else:
                hi = m
        return lo

    def _slab_location(self, x) -> Tuple[Optional[int], Optional[int]]:
        """(boundary index, slab index): exactly one is not None."""
        i = bisect.bisect_left(self.boundaries, x)
        if i < len(self.boundaries) and self.boundaries[i] == x:
            return i, None
        return None, i - 1

    def _slabs_for(self, x) -> List[int]:
        b, s = self._slab_location(x)
        if s is not None:
            return [s]
        out = []
        if b > 0:
            out.append(b - 1)
        if b < len(self.boundaries) - 1:
            out.append(b)
        return out

    # -- cells -----------------------------------------------------------

    def _build_cells(self):
        self.cells: List[Cell] = []
        self.slab_gap_cells: List[Tuple[Optional[int], ...]] = []
        prev: Dict[Tuple[int, int], int] = {}
        open_lo: Dict[int, int] = {}
        for i, stack in enumerate(self.slab_edges):
            cur: Dict[Tuple[int, int], int] = {}
            gaps: List[Optional[int]] = []
            k = len(stack)
            for g in range(k + 1):
                below = stack[g - 1] if g > 0 else _BOTTOM
                above = stack[g] if g < k else _TOP
                if below != _BOTTOM and self.e_interior_above[below]:
                    gaps.append(None)  # obstacle interior, not free space
                    continue
                key = (below, above)
                cid = prev.get(key)
                if cid is None:
                    cid = len(self.cells)
                    self.cells.append(None)  # type: ignore[arg-type]
                    open_lo[cid] = self.boundaries[i]
                cur[key] = cid
                gaps.append(cid)
            for key, cid in prev.items():
                if key not in cur:
                    self.cells[cid] = Cell(open_lo.pop(cid), self.boundaries[i], key[0], key[1])
            prev = cur
            self.slab_gap_cells.append(tuple(gaps))
        for key, cid in prev.items():
            self.cells[cid] = Cell(open_lo.pop(cid), self.boundaries[-1], key[0], key[1])

    # -- point classification ----------------------------------------------

    def _incident_edges(self, p: Point) -> List[int]:
        """All edges whose closed segment contains p (structure coords)."""
        info = self.vertex_info.get(p)
        if info is not None:
            return list(dict.fromkeys(info))
        out: List[int] = []
        px, py = p
        for eid in self.vertical_at.get(px, ()):
            ylo = min(self.e_ay[eid], self.e_by[eid])
            yhi = max(self.e_ay[eid], self.e_by[eid])
            if ylo <= py <= yhi:
                out.append(eid)
        for s in self._slabs_for(px):
            stack = self.slab_edges[s]
            j = self._first_above(s, px, py) - 1
            while j >= 0 and self._cmp_edge_y(stack[j], px, py) == 0:
                out.append(stack[j])
                j -= 1
        return list(dict.fromkeys(out))

    def _interior_owner_via_slab(self, slab: int, x, y) -> Optional[int]:
        """Owner obstacle when (x, y) is interior judged from this slab."""
        stack = self.slab_edges[slab]
        idx = self._first_above(slab, x, y)
        if idx == 0:
            return None
        below = stack[idx - 1]
        if self.e_interior_above[below]:
            return self.e_owner[below]
        return None

    def classify(self, p: Point):
        """(FREE, cell id) | (BOUNDARY, obstacle) | (INTERIOR, obstacle)."""
        sp = self._to_struct(p)
        px, py = sp
        if not (self.sx0 <= px <= self.sx1 and self.sy0 <= py <= self.sy1):
            raise EngineError(OUT_OF_BBOX, f"{p} outside bbox")
        incidents = self._incident_edges(sp)
        if incidents:
            return (BOUNDARY, self.e_owner[incidents[0]])
        slabs = self._slabs_for(px)
        owners = [self._interior_owner_via_slab(s, px, py) for s in slabs]
        if owners and all(o is not None for o in owners):
            return (INTERIOR, owners[0])
        for s in slabs:
            idx = self._first_above(s, px, py)
            cid = self.slab_gap_cells[s][idx]
            if cid is not None:
                return (FREE, cid)
        raise AssertionError(f"inconsistent location for {p}")

    # -- ray shooting -------------------------------------------------------

    def _to_struct(self, p: Point) -> Point:
        return Point(p.y, p.x) if self.transpose else p

    def _from_struct(self, p: Point) -> Point:
        return Point(p.y, p.x) if self.transpose else p

    def _vertex_key_at(self, sp: Point) -> Optional[Tuple[int, int]]:
        info = self.vertex_info.get(sp)
        if info is None:
            return None
        for eid in info:
            oi, j = self.e_key[eid]
            if self._to_struct(self.scene.obstacles[oi].vertices[j]) == sp:
                return (oi, j)
        return None

    def _mk_hit(self, sp: Point, eid: Optional[int]) -> RayHit:
        p = self._from_struct(Point(norm_coord(sp.x), norm_coord(sp.y)))
        if eid is None:
            return RayHit(point=p, on_bbox=True)
        return RayHit(
            point=p,
            on_bbox=False,
            obstacle=self.e_owner[eid],
            edge=self.e_key[eid],
            vertex=self._vertex_key_at(sp),
        )

    def _collinear_run_end(self, px, y, sign: int):
        """Far end of the maximal run of vertical edges at x=px through y."""
        edges = self.vertical_at.get(px, ())
        cur = y
        cur_eid = None
        moved = True
        while moved:
            moved = False
            for eid in edges:
                ylo = min(self.e_ay[eid], self.e_by[eid])
                yhi = max(self.e_ay[eid], self.e_by[eid])
                if sign > 0 and ylo <= cur < yhi:
                    cur, cur_eid, moved = yhi, eid, True
                elif sign < 0 and ylo < cur <= yhi:
                    cur, cur_eid, moved = ylo, eid, True
        return cur, cur_eid

    def shoot(self, p: Point, sign: int) -> RayHit:
        """Shoot along the wall axis: sign=+1 up, -1 down (structure coords)."""
        sp = self._to_struct(p)
        px, py = sp
        if not (self.sx0 <= px <= self.sx1 and self.sy0 <= py <= self.sy1):
            raise EngineError(OUT_OF_BBOX, f"{p} outside bbox")

        incidents = self._incident_edges(sp)
        if incidents:
            run_end, run_eid = self._collinear_run_end(px, py, sign)
            if run_eid is not None and run_end != py:
                return self._mk_hit(Point(px, run_end), run_eid)
            vkey = self._vertex_key_at(sp)
            if vkey is not None:
                oi, j = vkey
                verts = self.scene.obstacles[oi].vertices
                k = len(verts)
                v = self._to_struct(verts[j])
                w = self._to_struct(verts[(j + 1) % k])
                u = self._to_struct(verts[(j - 1) % k])
                a = (w.x - v.x, w.y - v.y)
                b = (u.x - v.x, u.y - v.y)
                if self.transpose:
                    a, b = b, a  # reflection flips the interior cone
                if _cone_contains(a, b, (0, sign)):
                    return self._mk_hit(sp, incidents[0])
            else:
                eid = incidents[0]
                if self.e_ax[eid] != self.e_bx[eid]:
                    above = self.e_interior_above[eid]
                    if (sign > 0) == above:
                        return self._mk_hit(sp, eid)
        else:
            owners = [self._interior_owner_via_slab(s, px, py) for s in self._slabs_for(px)]
            if owners and all(o is not None for o in owners):
                raise EngineError(POINT_INSIDE_OBSTACLE, f"{p} inside obstacle {owners[0]}")

        if px == self.sx0 or px == self.sx1:
            # traveling along the bbox frame; obstacles are strictly inside
            return self._mk_hit(Point(px, self.sy1 if sign > 0 else self.sy0), None)

        best_y = None
        best_eid = None
        for s in self._slabs_for(px):
            stack = self.slab_edges[s]
            if sign > 0:
                idx = self._first_above(s, px, py)
                if idx < len(stack):
                    yv = self._edge_y(stack[idx], px)
                    if best_y is None or yv < best_y:
                        best_y, best_eid = yv, stack[idx]
            else:
                j = self._first_above(s, px, py) - 1
                while j >= 0 and self._cmp_edge_y(stack[j], px, py) == 0:
                    j -= 1  # edges through p itself are not hits
                if j >= 0:
                    yv = self._edge_y(stack[j], px)
                    if best_y is None or yv > best_y:
                        best_y, best_eid = yv, stack[j]
        for eid in self.vertical_at.get(px, ()):
            ylo = min(self.e_ay[eid], self.e_by[eid])
            yhi = max(self.e_ay[eid], self.e_by[eid])
            cand = ylo if sign > 0 else yhi
            if sign > 0 and cand > py and (best_y is None or cand < best_y):
                best_y, best_eid = cand, eid
            elif sign < 0 and cand < py and (best_y is None or cand > best_y):
                best_y, best_eid = cand, eid
        if best_y is None:
            return self._mk_hit(Point(px, self.sy1 if sign > 0 else self.sy0), None)
        return self._mk_hit(Point(px, best_y), best_eid)

    # -- interval structure along a wall-parallel line -----------------------

    def _parity_intervals(self, slab: int, x) -> List[Tuple[Fraction, Fraction, int]]:
        """Obstacle-interior intervals of the line at x judged from one slab."""
        out = []
        stack = self.slab_edges[slab]
        for j in range(len(stack) - 1):
            below = stack[j]
            if not self.e_interior_above[below]:
                continue
            lo = self._edge_y(below, x)
            hi = self._edge_y(stack[j + 1], x)
            if lo < hi:
                out.append((lo, hi, self.e_owner[below]))
        return out

    def interior_intervals_at(self, x) -> List[Tuple[Fraction, Fraction, int]]:
        """Maximal open intervals of the line {x} inside obstacle interiors.

        At event coordinates the exact answer is the intersection of the
        limits from the two adjacent slabs (an obstacle ending exactly at
        x contributes nothing)."""
        b, s = self._slab_location(x)
        if s is not None:
            return self._parity_intervals(s, x)
        parts = [self._parity_intervals(sl, x) for sl in self._slabs_for(x)]
        if len(parts) < 2:
            return []
        left, right = parts
        out = []
        i = j = 0
        while i < len(left) and j < len(right):
            lo = max(left[i][0], right[j][0])
            hi = min(left[i][1], right[j][1])
            if lo < hi:
                out.append((lo, hi, left[i][2]))
            if left[i][1] <= right[j][1]:
                i += 1
            else:
                j += 1
        return out


class VisibilityIndex:
    """Both decompositions plus point location and projection queries."""

    def __init__(self, scene: Scene):
        self.scene = scene
        self.vertical = SlabStructure(scene, transpose=False)
        self.horizontal = SlabStructure(scene, transpose=True)

    def ray_shoot(self, p: Point, direction: str) -> RayHit:
        if direction == U:
            return self.vertical.shoot(p, 1)
        if direction == D:
            return self.vertical.shoot(p, -1)
        if direction == R:
            return self.horizontal.shoot(p, 1)
        if direction == L:
            return self.horizontal.shoot(p, -1)
        raise ValueError(f"bad direction {direction!r}")

    def projections(self, p: Point) -> Dict[str, RayHit]:
        return {d: self.ray_shoot(p, d) for d in (L, R, U, D)}

    def locate(self, p: Point):
        return self.vertical.classify(p)

    def is_free(self, p: Point) -> bool:
        return self.locate(p)[0] in (FREE, BOUNDARY)

    def require_free(self, p: Point):
        kind, who = self.locate(p)
        if kind == INTERIOR:
            raise EngineError(POINT_INSIDE_OBSTACLE, f"{p} inside obstacle {who}")


def build_decompositions(scene: Scene) -> VisibilityIndex:
    return VisibilityIndex(scene)


# -- independent brute-force reference --------------------------------------


def ray_shoot_brute(scene: Scene, p: Point, direction: str) -> RayHit:
    """O(n) reference with the same semantics, used to cross-check the
    slab structures in tests."""
    sign = 1 if direction in (R, U) else -1
    swap = direction in (L, R)

    def t(pt: Point) -> Point:
        return Point(pt.y, pt.x) if swap else pt

    sp = t(p)
    bx0, by0, bx1, by1 = scene.bbox
    if swap:
        bx0, by0, bx1, by1 = by0, bx0, by1, bx1
    px, py = sp

    for oi, poly in enumerate(scene.obstacles):
        verts = poly.vertices
        k = len(verts)
        for j in range(k):
            a, b = t(verts[j]), t(verts[(j + 1) % k])
            if not on_segment(Point(px, py), Segment(a, b)):
                continue
            if a.x == b.x == px:
                cur = py
                moved = True
                while moved:
                    moved = False
                    for jj in range(k):
                        aa, bb = t(verts[jj]), t(verts[(jj + 1) % k])
                        if aa.x == bb.x == px:
                            lo2, hi2 = min(aa.y, bb.y), max(aa.y, bb.y)
                            if sign > 0 and lo2 <= cur < hi2:
                                cur, moved = hi2, True
                            elif sign < 0 and lo2 < cur <= hi2:
                                cur, moved = lo2, True
                if cur != py:
                    hitp = Point(px, cur)
                    vv = None
                    for jj in range(k):
                        if t(verts[jj]) == hitp:
                            vv = (oi, jj)
                    return RayHit(point=t(hitp), on_bbox=False, obstacle=oi,
                                  edge=(oi, j), vertex=vv)
                continue
            if sp == a or sp == b:
                jj = j if sp == a else (j + 1) % k
                v, w, u = t(verts[jj]), t(verts[(jj + 1) % k]), t(verts[(jj - 1) % k])
                cone_a = (w.x - v.x, w.y - v.y)
                cone_b = (u.x - v.x, u.y - v.y)
                if swap:
                    cone_a, cone_b = cone_b, cone_a
                if _cone_contains(cone_a, cone_b, (0, sign)):
                    return RayHit(point=p, on_bbox=False, obstacle=oi,
                                  edge=(oi, j), vertex=(oi, jj))
            elif a.x != b.x:
                interior_above = ((b.x - a.x) < 0) if swap else ((b.x - a.x) > 0)
                if (sign > 0) == interior_above:
                    return RayHit(point=p, on_bbox=False, obstacle=oi, edge=(oi, j))

    best = None  # (hit y, obstacle, edge index)
    for oi, poly in enumerate(scene.obstacles):
        verts = poly.vertices
        k = len(verts)
        for j in range(k):
            a, b = t(verts[j]), t(verts[(j + 1) % k])
            if a.x == b.x:
                if a.x != px:
                    continue
                cand = min(a.y, b.y) if sign > 0 else max(a.y, b.y)
            else:
                lo, hi = (a.x, b.x) if a.x < b.x else (b.x, a.x)
                if not (lo <= px <= hi):
                    continue
                cand = a.y + Fraction((px - a.x) * (b.y - a.y), b.x - a.x)
            if sign > 0 and cand > py and (best is None or cand < best[0]):
                best = (cand, oi, j)
            elif sign < 0 and cand < py and (best is None or cand > best[0]):
                best = (cand, oi, j)
    if best is None:
        return RayHit(point=t(Point(px, by1 if sign > 0 else by0)), on_bbox=True)
    hitp = Point(px, norm_coord(best[0]))
    oi = best[1]
    vv = None
    for jj, v in enumerate(scene.obstacles[oi].vertices):
        if t(v) == hitp:
            vv = (oi, jj)
    return RayHit(point=t(hitp), on_bbox=False, obstacle=oi, edge=(oi, best[2]), vertex=vv)


def _axis_ray_edge_hits(v: Point, dx: int, dy: int, a: Point, b: Point):
    """Intersections of the axis ray from v with one rectilinear edge."""
    if dx != 0:
        if a.y == b.y:
            if a.y == v.y:
                yield a
                yield b
        elif min(a.y, b.y) <= v.y <= max(a.y, b.y):
            yield Point(a.x, v.y)
    else:
        if a.x == b.x:
            if a.x == v.x:
                yield a
                yield b
        elif min(a.x, b.x) <= v.x <= max(a.x, b.x):
            yield Point(v.x, a.y)


def internal_projections(scene: Scene) -> List[Tuple[Point, Tuple[int, int]]]:
    """Extensions of the incident edges of every reflex vertex through the
    obstacle interior to the first boundary point hit."""
    if scene.mode != RECTILINEAR_WEIGHTED:
        raise EngineError(WRONG_MODE, "internal projections need a weighted rectilinear scene")
    out: List[Tuple[Point, Tuple[int, int]]] = []
    for oi, poly in enumerate(scene.obstacles):
        verts = poly.vertices
        k = len(verts)
        edges = poly.edges()
        for j in range(k):
            u, v, w = verts[(j - 1) % k], verts[j], verts[(j + 1) % k]
            if orientation(u, v, w) != RIGHT:
                continue  # reflex vertex of a CCW polygon turns right
            for src in (u, w):
                dx = 0 if v.x == src.x else (1 if v.x > src.x else -1)
                dy = 0 if v.y == src.y else (1 if v.y > src.y else -1)
                best = None
                for a, b in edges:
                    for cand in _axis_ray_edge_hits(v, dx, dy, a, b):
                        lam = (cand.x - v.x) * dx + (cand.y - v.y) * dy
                        if lam > 0 and (best is None or lam < best[0]):
                            best = (lam, cand)
                if best is not None:
                    out.append((best[1], (oi, j)))
    return out
