"""Deterministic SVG rendering of scenes, search structures and paths.

Exact rational coordinates are converted to floats only here, at the
drawing boundary.  The canvas is a fixed 1000x1000 viewBox; the scene
bbox is fitted with a small margin and the y axis is flipped to match
screen conventions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from .geometry import Point
from .scene import RECTILINEAR_WEIGHTED, Scene

CANVAS = 1000.0
MARGIN = 20.0

LAYERS = ("obstacles", "cutlines", "steiner-points", "gateways", "path", "hanan-grid")


class _Mapper:
    def __init__(self, scene: Scene):
        x0, y0, x1, y1 = scene.bbox
        self.x0, self.y0 = x0, y0
        span = max(x1 - x0, y1 - y0, 1)
        self.scale = (CANVAS - 2 * MARGIN) / span

    def pt(self, p: Point) -> str:
        x = MARGIN + (float(p.x) - self.x0) * self.scale
        y = CANVAS - (MARGIN + (float(p.y) - self.y0) * self.scale)
        return f"{x:.2f},{y:.2f}"

    def xy(self, p: Point):
        x = MARGIN + (float(p.x) - self.x0) * self.scale
        y = CANVAS - (MARGIN + (float(p.y) - self.y0) * self.scale)
        return x, y


def render_svg(
    scene: Scene,
    layers: Sequence[str] = ("obstacles",),
    index=None,
    path: Optional[Sequence[Point]] = None,
    gateway_sets: Iterable = (),
) -> str:
    m = _Mapper(scene)
    x0, y0, x1, y1 = scene.bbox
    parts: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {CANVAS:.0f} {CANVAS:.0f}">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{CANVAS - 2 * MARGIN:.2f}" '
        f'height="{CANVAS - 2 * MARGIN:.2f}" fill="none" stroke="#888" stroke-width="1"/>',
    ]

    if "hanan-grid" in layers and scene.mode == RECTILINEAR_WEIGHTED:
        xs = sorted({v.x for v in scene.all_vertices()})
        ys = sorted({v.y for v in scene.all_vertices()})
        for gx in xs:
            a = m.xy(Point(gx, y0))
            b = m.xy(Point(gx, y1))
            parts.append(
                f'<line x1="{a[0]:.2f}" y1="{a[1]:.2f}" x2="{b[0]:.2f}" y2="{b[1]:.2f}" '
                'stroke="#ddd" stroke-width="0.5"/>'
            )
        for gy in ys:
            a = m.xy(Point(x0, gy))
            b = m.xy(Point(x1, gy))
            parts.append(
                f'<line x1="{a[0]:.2f}" y1="{a[1]:.2f}" x2="{b[0]:.2f}" y2="{b[1]:.2f}" '
                'stroke="#ddd" stroke-width="0.5"/>'
            )

    if "cutlines" in layers and index is not None:
        trees = []
        if hasattr(index, "tree"):
            trees = [index.tree]
        elif hasattr(index, "trees"):
            trees = list(index.trees.values())
        for tree in trees:
            for node in tree.nodes:
                if tree.axis == "x":
                    a = m.xy(Point(node.coord, y0))
                    b = m.xy(Point(node.coord, y1))
                else:
                    a = m.xy(Point(x0, node.coord))
                    b = m.xy(Point(x1, node.coord))
                parts.append(
                    f'<line x1="{a[0]:.2f}" y1="{a[1]:.2f}" x2="{b[0]:.2f}" y2="{b[1]:.2f}" '
                    f'stroke="#9cf" stroke-width="{max(0.4, 2.0 / node.level):.2f}" '
                    'stroke-dasharray="4 3"/>'
                )

    if "obstacles" in layers:
        for oi, poly in enumerate(scene.obstacles):
            pts = " ".join(m.pt(v) for v in poly.vertices)
            w = scene.weight_of(oi) if scene.mode == RECTILINEAR_WEIGHTED else None
            fill = "#f4a" if w is None else ("#622" if w == float("inf") else "#fa4")
            parts.append(f'<polygon points="{pts}" fill="{fill}" fill-opacity="0.45" '
                         'stroke="#a33" stroke-width="1.5"/>')
            if w is not None:
                cx = sum(float(v.x) for v in poly.vertices) / len(poly)
                cy = sum(float(v.y) for v in poly.vertices) / len(poly)
                x, y = m.xy(Point(Fraction(cx).limit_denominator(100),
                                  Fraction(cy).limit_denominator(100)))
                label = "inf" if w == float("inf") else str(w)
                parts.append(f'<text x="{x:.2f}" y="{y:.2f}" font-size="14" '
                             f'text-anchor="middle">{label}</text>')

    if "steiner-points" in layers and index is not None:
        graph = getattr(index, "graph", None)
        if graph is not None:
            for node in graph.nodes:
                x, y = m.xy(node.location)
                r = 3.0 if node.kind == "vertex" else 1.6
                parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="#36c"/>')

    if "gateways" in layers:
        for gs in gateway_sets:
            for e in gs.entries:
                pts = " ".join(m.pt(p) for p in e.polyline)
                parts.append(f'<polyline points="{pts}" fill="none" stroke="#2a2" '
                             'stroke-width="1.2" stroke-dasharray="2 2"/>')
                x, y = m.xy(e.polyline[-1])
                parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.5" fill="none" '
                             'stroke="#2a2" stroke-width="1.5"/>')

    if "path" in layers and path:
        pts = " ".join(m.pt(p) for p in path)
        parts.append(f'<polyline points="{pts}" fill="none" stroke="#111" stroke-width="2.5"/>')
        for endpoint in (path[0], path[-1]):
            x, y = m.xy(endpoint)
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="#111"/>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
