"""Scene model: obstacle sets, validation, random generation, JSON i/o.

A scene is immutable after construction.  Validation enforces the input
contract everything downstream relies on: simple CCW polygons, pairwise
disjoint closures, obstacles strictly inside the bounding box, and (in
polygonal mode) globally distinct vertex x- and y-coordinates.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .geometry import (
    BOUNDARY,
    EXTERIOR,
    INFINITE,
    INTERIOR,
    MAX_COORD,
    Point,
    Polygon,
    Segment,
    format_rational,
    parse_rational,
    point_in_polygon,
    segments_intersect,
)

POLYGONAL = "polygonal"
RECTILINEAR_WEIGHTED = "rectilinear-weighted"

# validation error codes
DISJOINTNESS_VIOLATION = "DISJOINTNESS_VIOLATION"
GENERAL_POSITION_VIOLATION = "GENERAL_POSITION_VIOLATION"
NON_RECTILINEAR_EDGE = "NON_RECTILINEAR_EDGE"
NEGATIVE_WEIGHT = "NEGATIVE_WEIGHT"
MALFORMED_POLYGON = "MALFORMED_POLYGON"
OUT_OF_BBOX = "OUT_OF_BBOX"
PARSE_ERROR = "PARSE_ERROR"
INFEASIBLE_PARAMETERS = "INFEASIBLE_PARAMETERS"


class SceneError(ValueError):
    """Validation or parse failure; `code` is a stable machine name."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class Scene:
    obstacles: Tuple[Polygon, ...]
    bbox: Tuple[int, int, int, int]  # x0, y0, x1, y1
    mode: str = POLYGONAL
    weights: Optional[Tuple[object, ...]] = None  # Fraction/int/INFINITE per obstacle

    def vertex_count(self) -> int:
        return sum(len(p) for p in self.obstacles)

    def all_vertices(self):
        for poly in self.obstacles:
            yield from poly.vertices

    def weight_of(self, obstacle_index: int):
        if self.weights is None:
            return 0
        return self.weights[obstacle_index]


@dataclass(frozen=True)
class SceneStats:
    n: int
    h: int
    levels: int
    super_levels: int


def _polygons_closures_intersect(p1: Polygon, p2: Polygon) -> bool:
    b1 = p1.bounding_box()
    b2 = p2.bounding_box()
    if b1[2] < b2[0] or b2[2] < b1[0] or b1[3] < b2[1] or b2[3] < b1[1]:
        return False
    for e1 in p1.edges():
        for e2 in p2.edges():
            if segments_intersect(e1, e2) is not None:
                return True
    # containment without edge contact
    if point_in_polygon(p1.vertices[0], p2) != EXTERIOR:
        return True
    if point_in_polygon(p2.vertices[0], p1) != EXTERIOR:
        return True
    return False


def compute_stats(n: int, h: int) -> SceneStats:
    levels = max(1, math.ceil(math.log2(max(n, 2))))
    super_levels = math.ceil(math.sqrt(levels))
    return SceneStats(n=n, h=h, levels=levels, super_levels=super_levels)


def validate_scene(scene: Scene) -> SceneStats:
    x0, y0, x1, y1 = scene.bbox
    if x0 >= x1 or y0 >= y1:
        raise SceneError(MALFORMED_POLYGON, f"degenerate bbox {scene.bbox}")

    for i, poly in enumerate(scene.obstacles):
        if len(poly) < 3:
            raise SceneError(MALFORMED_POLYGON, f"obstacle {i} has fewer than 3 vertices")
        for v in poly.vertices:
            if not (isinstance(v.x, int) and isinstance(v.y, int)):
                raise SceneError(MALFORMED_POLYGON, f"obstacle {i} has non-integer vertex {v}")
            if abs(v.x) >= MAX_COORD or abs(v.y) >= MAX_COORD:
                raise SceneError(MALFORMED_POLYGON, f"obstacle {i} vertex {v} exceeds coordinate cap")
        if not poly.is_simple():
            raise SceneError(MALFORMED_POLYGON, f"obstacle {i} is not a simple polygon")
        if poly.signed_area2() <= 0:
            raise SceneError(MALFORMED_POLYGON, f"obstacle {i} is not counterclockwise")
        bx0, by0, bx1, by1 = poly.bounding_box()
        if not (x0 < bx0 and bx1 < x1 and y0 < by0 and by1 < y1):
            raise SceneError(OUT_OF_BBOX, f"obstacle {i} is not strictly inside the bbox")

    for i in range(len(scene.obstacles)):
        for j in range(i + 1, len(scene.obstacles)):
            if _polygons_closures_intersect(scene.obstacles[i], scene.obstacles[j]):
                raise SceneError(DISJOINTNESS_VIOLATION, f"obstacles {i} and {j} intersect")

    if scene.mode == POLYGONAL:
        if scene.weights is not None:
            raise SceneError(MALFORMED_POLYGON, "polygonal scenes carry no weights")
        seen_x = {}
        seen_y = {}
        for i, poly in enumerate(scene.obstacles):
            for v in poly.vertices:
                if v.x in seen_x:
                    raise SceneError(
                        GENERAL_POSITION_VIOLATION,
                        f"obstacles {seen_x[v.x]} and {i} share vertex x={v.x}",
                    )
                if v.y in seen_y:
                    raise SceneError(
                        GENERAL_POSITION_VIOLATION,
                        f"obstacles {seen_y[v.y]} and {i} share vertex y={v.y}",
                    )
                seen_x[v.x] = i
                seen_y[v.y] = i
    elif scene.mode == RECTILINEAR_WEIGHTED:
        if scene.weights is None or len(scene.weights) != len(scene.obstacles):
            raise SceneError(NEGATIVE_WEIGHT, "weighted scene needs one weight per obstacle")
        for i, poly in enumerate(scene.obstacles):
            for e in poly.edges():
                if e.a.x != e.b.x and e.a.y != e.b.y:
                    raise SceneError(NON_RECTILINEAR_EDGE, f"obstacle {i} edge {e} is sloped")
        for i, w in enumerate(scene.weights):
            if w != INFINITE and w < 0:
                raise SceneError(NEGATIVE_WEIGHT, f"obstacle {i} has weight {w} < 0")
    else:
        raise SceneError(PARSE_ERROR, f"unknown mode {scene.mode!r}")

    return compute_stats(scene.vertex_count(), len(scene.obstacles))


def default_bbox(obstacles: Sequence[Polygon]) -> Tuple[int, int, int, int]:
    """Obstacle bounding box inflated by 10 percent, margin at least 1."""
    if not obstacles:
        return (0, 0, 10, 10)
    xs0, ys0, xs1, ys1 = zip(*(p.bounding_box() for p in obstacles))
    bx0, by0, bx1, by1 = min(xs0), min(ys0), max(xs1), max(ys1)
    margin = max(1, math.ceil(0.1 * max(bx1 - bx0, by1 - by0)))
    return (bx0 - margin, by0 - margin, bx1 + margin, by1 + margin)


# fixtures shared across the test suite
SCENE_A = Scene(
    obstacles=(Polygon([(2, 1), (5, 2), (4, 6), (1, 5)]),),
    bbox=(-1, -1, 7, 7),
    mode=POLYGONAL,
)

SCENE_W = Scene(
    obstacles=(Polygon([(1, 1), (3, 1), (3, 3), (1, 3)]),),
    bbox=(-1, -1, 5, 5),
    mode=RECTILINEAR_WEIGHTED,
    weights=(Fraction(1, 2),),
)


DEFAULT_WEIGHT_PALETTE = (0, Fraction(1, 2), Fraction(1, 3), 1, 2, Fraction(7, 2), INFINITE)


def _random_star_polygon(rng: random.Random, cx: int, cy: int, radius: int, k: int) -> Optional[Polygon]:
    for _ in range(40):
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
        pts = []
        for ang in angles:
            r = rng.uniform(0.45 * radius, 0.95 * radius)
            pts.append((cx + round(r * math.cos(ang)), cy + round(r * math.sin(ang))))
        pts = list(dict.fromkeys(pts))
        if len(pts) != k:
            continue
        poly = Polygon(pts)
        if poly.signed_area2() <= 0 or not poly.is_simple():
            continue
        return poly
    return None


def _random_histogram_polygon(rng: random.Random, x0: int, y0: int, width: int, height: int, k: int) -> Optional[Polygon]:
    """Rectilinear 'histogram' polygon with exactly k vertices (k even >= 4)."""
    cols = (k - 2) // 2
    if cols < 1 or width < cols:
        return None
    for _ in range(40):
        cuts = sorted(rng.sample(range(x0 + 1, x0 + width), cols - 1)) if cols > 1 else []
        xs = [x0] + cuts + [x0 + width]
        heights = []
        prev = None
        ok = True
        for _ in range(cols):
            choices = [h for h in range(1, height + 1) if h != prev]
            if not choices:
                ok = False
                break
            h = rng.choice(choices)
            heights.append(h)
            prev = h
        if not ok:
            continue
        verts: List[Tuple[int, int]] = [(x0, y0)]
        verts.append((xs[-1], y0))
        for i in range(cols - 1, -1, -1):
            right, left = xs[i + 1], xs[i]
            top = y0 + heights[i]
            if not verts or verts[-1] != (right, top):
                verts.append((right, top))
            verts.append((left, top))
        verts = [v for i, v in enumerate(verts) if v != verts[(i + 1) % len(verts)]]
        poly = Polygon(verts)
        if len(poly) != k or poly.signed_area2() <= 0 or not poly.is_simple():
            continue
        return poly
    return None


def _enforce_general_position(rng: random.Random, polys: List[Polygon], slack: int) -> Optional[List[Polygon]]:
    """Nudge coordinates so all vertex x's and y's are globally distinct."""
    for axis in (0, 1):
        used = set()
        out = []
        for poly in polys:
            new_verts = []
            for v in poly.vertices:
                c = v[axis]
                if c in used:
                    for delta in range(1, slack):
                        cand = c + (delta if rng.random() < 0.5 else -delta)
                        if cand not in used:
                            c = cand
                            break
                        cand = c - delta
                        if cand not in used:
                            c = cand
                            break
                    else:
                        return None
                used.add(c)
                new_verts.append((c, v.y) if axis == 0 else (v.x, c))
            out.append(Polygon(new_verts))
        polys = out
    for poly in polys:
        if poly.signed_area2() <= 0 or not poly.is_simple():
            return None
    return polys


def generate_scene(n: int, h: int, mode: str = POLYGONAL, seed: int = 0,
                   weight_palette: Sequence[object] = DEFAULT_WEIGHT_PALETTE) -> Scene:
    """Deterministic random scene with ~n vertices over h obstacles.

    Obstacles are laid out on a coarse grid of disjoint cells, so
    disjointness holds by construction and survives the small general
    position nudges.  Weighted mode uses even vertex counts (>= 4 per
    obstacle); an odd total budget loses one vertex.
    """
    if h < 1 or n < 3 * h:
        raise SceneError(INFEASIBLE_PARAMETERS, f"cannot fit n={n} vertices in h={h} obstacles")
    if mode == RECTILINEAR_WEIGHTED and n < 4 * h:
        raise SceneError(INFEASIBLE_PARAMETERS, f"weighted mode needs n >= 4h (n={n}, h={h})")

    for attempt in range(30):
        rng = random.Random((seed << 8) ^ attempt)
        cols = math.ceil(math.sqrt(h))
        rows = math.ceil(h / cols)
        cell = max(24, 6 * n)

        if mode == POLYGONAL:
            budgets = [3] * h
            for _ in range(n - 3 * h):
                budgets[rng.randrange(h)] += 1
        else:
            budgets = [4] * h
            extras = (n - 4 * h) // 2
            for _ in range(extras):
                budgets[rng.randrange(h)] += 2

        polys: List[Polygon] = []
        ok = True
        for i in range(h):
            r, c = divmod(i, cols)
            x_base = c * cell
            y_base = r * cell
            if mode == POLYGONAL:
                poly = _random_star_polygon(
                    rng, x_base + cell // 2, y_base + cell // 2, cell // 2 - cell // 8, budgets[i]
                )
            else:
                pad = cell // 8
                poly = _random_histogram_polygon(
                    rng, x_base + pad, y_base + pad, cell - 2 * pad, cell - 2 * pad, budgets[i]
                )
            if poly is None:
                ok = False
                break
            polys.append(poly)
        if not ok:
            continue

        if mode == POLYGONAL:
            nudged = _enforce_general_position(rng, polys, slack=cell // 12)
            if nudged is None:
                continue
            polys = nudged

        scene = Scene(
            obstacles=tuple(polys),
            bbox=default_bbox(polys),
            mode=mode,
            weights=tuple(rng.choice(list(weight_palette)) for _ in polys)
            if mode == RECTILINEAR_WEIGHTED
            else None,
        )
        try:
            validate_scene(scene)
        except SceneError:
            continue
        return scene
    raise SceneError(INFEASIBLE_PARAMETERS, f"packing failed for n={n}, h={h}, mode={mode}")


def save_scene(scene: Scene) -> bytes:
    """Canonical JSON serialization (fixed key order, exact weights)."""
    doc = {
        "mode": scene.mode,
        "bbox": list(scene.bbox),
        "obstacles": [
            {
                "vertices": [[int(v.x), int(v.y)] for v in poly.vertices],
                "weight": format_rational(scene.weights[i]) if scene.weights is not None else None,
            }
            for i, poly in enumerate(scene.obstacles)
        ],
    }
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def load_scene(data: bytes) -> Scene:
    try:
        doc = json.loads(data.decode("utf-8"))
        mode = doc["mode"]
        bbox = tuple(int(v) for v in doc["bbox"])
        if len(bbox) != 4:
            raise ValueError("bbox must have 4 entries")
        obstacles = []
        weights = []
        has_weights = False
        for entry in doc["obstacles"]:
            verts = [(int(x), int(y)) for x, y in entry["vertices"]]
            obstacles.append(Polygon(verts))
            w = entry.get("weight")
            if w is not None:
                has_weights = True
                weights.append(parse_rational(str(w)))
            else:
                weights.append(None)
    except SceneError:
        raise
    except Exception as exc:
        raise SceneError(PARSE_ERROR, str(exc)) from exc

    if has_weights and any(w is None for w in weights):
        raise SceneError(PARSE_ERROR, "mixed weighted/unweighted obstacles")
    scene = Scene(
        obstacles=tuple(obstacles),
        bbox=bbox,  # type: ignore[arg-type]
        mode=mode,
        weights=tuple(weights) if has_weights else None,
    )
    validate_scene(scene)
    return scene
