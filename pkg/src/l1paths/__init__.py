"""Exact two-point L1 shortest path queries among polygonal obstacles.

The library preprocesses a scene of pairwise-disjoint polygonal obstacles
into a Steiner-point track graph and answers two-point distance/path
queries through small per-query gateway sets.  A weighted rectilinear
mode prices paths through obstacle interiors, and brute-force oracles
back every answer in the test suite.
"""

from .geometry import Point, Segment, Polygon, l1_length, orientation
from .scene import Scene, SceneStats, validate_scene, generate_scene, load_scene, save_scene

__all__ = [
    "Point",
    "Segment",
    "Polygon",
    "l1_length",
    "orientation",
    "Scene",
    "SceneStats",
    "validate_scene",
    "generate_scene",
    "load_scene",
    "save_scene",
]

__version__ = "0.1.0"
