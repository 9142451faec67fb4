"""Deterministic example frameworks.

Coordinates for the figure-based examples are fixed constants chosen to have
the properties the examples are meant to show; the properties are what the
test suite checks.
"""

from __future__ import annotations

import itertools
from typing import Callable

import numpy as np

from .conic import conic_space
from .framework import Framework, Graph, is_connected
from .operations import cone


class GalleryError(ValueError):
    pass


def _complete_on(groups) -> list[tuple[int, int]]:
    edges = set()
    for g in groups:
        for a, b in itertools.combinations(sorted(g), 2):
            edges.add((a, b))
    return sorted(edges)


def grid(k: int = 3) -> Framework:
    """k x k integer grid with horizontal and vertical unit edges, centered when k is odd."""
    k = int(k)
    if k < 2:
        raise GalleryError("grid needs k >= 2")
    off = (k - 1) // 2
    pts = [(x - off, y - off) for y in range(k) for x in range(k)]
    idx = {p: i for i, p in enumerate(pts)}
    edges = []
    for (x, y), i in idx.items():
        if (x + 1, y) in idx:
            edges.append((i, idx[(x + 1, y)]))
        if (x, y + 1) in idx:
            edges.append((i, idx[(x, y + 1)]))
    return Framework.from_edges(pts, edges)


GATE_POINTS = [(0, 0), (2, 0), (0, 1), (2, 1), (0, 2), (2, 2)]
GATE_EDGES = [(0, 2), (2, 4), (1, 3), (3, 5), (2, 3), (4, 5)]


def gate() -> Framework:
    """Two posts and two rails; every edge is horizontal or vertical."""
    f = Framework.from_edges(GATE_POINTS, GATE_EDGES)
    assert conic_space(f), "gate must have its edge directions on a conic"
    return f


def hyperbolic_paraboloid(s: int = 3, t: int = 3) -> Framework:
    """Vertices (a, b, ab) for a in 1..s, b in 1..t; complete graph along each ruling line."""
    s, t = int(s), int(t)
    if s < 3 or t < 3:
        raise GalleryError("hyperbolic_paraboloid needs s, t >= 3")
    pts = [(a, b, a * b) for a in range(1, s + 1) for b in range(1, t + 1)]
    rows = [[i * t + j for j in range(t)] for i in range(s)]
    cols = [[i * t + j for i in range(s)] for j in range(t)]
    return Framework.from_edges(pts, _complete_on(rows + cols))


def collinear_complete(k: int = 3) -> Framework:
    """k points on a line (so in E^1) joined by every edge."""
    k = int(k)
    if k < 2:
        raise GalleryError("collinear_complete needs k >= 2")
    pts = [[i + 0.25 * i * i] for i in range(k)]
    return Framework.from_edges(pts, _complete_on([range(k)]))


TWO_LINES_X = [-2.0, -1.0, 1.0, 3.0]
TWO_LINES_Y = [-2.0, -1.0, 1.0, 2.0]


def two_lines_braced(braced: bool = True) -> Framework:
    """Vertices on the two axes joined by paths through the origin.

    With ``braced`` each line also gets one long edge between its extreme
    vertices, which makes the framework carry a PSD stress of rank n - 3.
    """
    xs = sorted(TWO_LINES_X + [0.0])
    ys = sorted(TWO_LINES_Y + [0.0])
    pts = [(0.0, 0.0)] + [(x, 0.0) for x in TWO_LINES_X] + [(0.0, y) for y in TWO_LINES_Y]
    idx = {p: i for i, p in enumerate(pts)}
    edges = []
    for line in ([(x, 0.0) for x in xs], [(0.0, y) for y in ys]):
        for a, b in zip(line, line[1:]):
            edges.append((idx[a], idx[b]))
        if braced:
            edges.append((idx[line[0]], idx[line[-1]]))
    return Framework.from_edges(pts, edges)


# rational points of the unit circle, so every vertex has exact coordinates
ELLIPTIC_CONE_DIRECTIONS = [(1.0, 0.0), (0.6, 0.8), (-5 / 13, 12 / 13), (-8 / 17, -15 / 17)]
ELLIPTIC_CONE_HEIGHTS = [1.0, 2.0]


def elliptic_cone(lines: int = 4) -> Framework:
    """Apex of x^2 + y^2 = z^2 plus two more points on each of several ruling lines.

    Each ruling line carries the complete graph on its three vertices. Three
    lines would allow a stress of rank n - 4, so four are used by default.
    """
    lines = int(lines)
    if not 3 <= lines <= len(ELLIPTIC_CONE_DIRECTIONS):
        raise GalleryError(f"elliptic_cone supports 3..{len(ELLIPTIC_CONE_DIRECTIONS)} lines")
    pts = [(0.0, 0.0, 0.0)]
    groups = []
    for cx, cy in ELLIPTIC_CONE_DIRECTIONS[:lines]:
        group = [0]
        for z in ELLIPTIC_CONE_HEIGHTS:
            group.append(len(pts))
            pts.append((z * cx, z * cy, z))
        groups.append(group)
    return Framework.from_edges(pts, _complete_on(groups))


TWO_PLANES_POINTS = [
    (0.0, 0.0, 0.0),  # A, on the intersection line
    (2.0, 0.0, 0.0),  # B, on the intersection line
    (-1.0, 0.0, 0.0),  # third point of line AB
    (1.0, 2.0, 0.0),  # C, plane z = 0
    (0.5, 1.0, 0.0),  # on AC
    (1.5, 1.0, 0.0),  # on BC
    (1.0, 0.0, 2.0),  # D, plane y = 0
    (0.5, 0.0, 1.0),  # on AD
    (1.5, 0.0, 1.0),  # on BD
]
TWO_PLANES_LINES = [(0, 1, 2), (0, 4, 3), (1, 5, 3), (0, 7, 6), (1, 8, 6)]


def two_planes() -> Framework:
    """Line triangles in the planes z = 0 and y = 0 sharing the segment AB of the x-axis."""
    return Framework.from_edges(TWO_PLANES_POINTS, _complete_on(TWO_PLANES_LINES))


def triangle_with_center() -> Framework:
    """K4: a triangle plus its centroid."""
    tri = np.array([(0.0, 0.0), (4.0, 0.0), (1.0, 3.0)])
    pts = np.vstack([tri, tri.mean(axis=0)])
    return Framework.from_edges(pts, _complete_on([range(4)]))


GENERATORS: dict[str, Callable[..., Framework]] = {
    "grid": grid,
    "gate": gate,
    "hyperbolic_paraboloid": hyperbolic_paraboloid,
    "collinear_complete": collinear_complete,
    "two_lines_braced": two_lines_braced,
    "elliptic_cone": elliptic_cone,
    "two_planes": two_planes,
    "triangle_with_center": triangle_with_center,
}

PARAM_NAMES = {
    "grid": ("k",),
    "gate": (),
    "hyperbolic_paraboloid": ("s", "t"),
    "collinear_complete": ("k",),
    "two_lines_braced": ("braced",),
    "elliptic_cone": ("lines",),
    "two_planes": (),
    "triangle_with_center": (),
}


def _coerce(value):
    if isinstance(value, str):
        low = value.lower()
        if low in ("true", "false"):
            return low == "true"
        try:
            return int(value)
        except ValueError:
            return float(value)
    return value


def generate(name: str, **params) -> Framework:
    """Build a named example. ``cone_of`` takes ``base`` (a generator name) plus its params."""
    if name == "cone_of":
        base = params.pop("base", None)
        height = float(params.pop("height", 1.0))
        if base is None:
            raise GalleryError("cone_of needs a base generator name")
        return cone(generate(base, **params), apex_height=height).framework
    if name not in GENERATORS:
        raise GalleryError(f"unknown gallery name {name!r}; choose from {sorted(GENERATORS) + ['cone_of']}")
    allowed = PARAM_NAMES[name]
    unknown = set(params) - set(allowed)
    if unknown:
        raise GalleryError(f"{name} does not take parameters {sorted(unknown)}")
    return GENERATORS[name](**{k: _coerce(v) for k, v in params.items()})


# name, params
CATALOG = [
    ("grid", {"k": 3}),
    ("gate", {}),
    ("hyperbolic_paraboloid", {"s": 3, "t": 3}),
    ("collinear_complete", {"k": 3}),
    ("collinear_complete", {"k": 4}),
    ("collinear_complete", {"k": 5}),
    ("two_lines_braced", {}),
    ("two_lines_braced", {"braced": False}),
    ("elliptic_cone", {}),
    ("two_planes", {}),
    ("triangle_with_center", {}),
    ("cone_of", {"base": "triangle_with_center"}),
    ("cone_of", {"base": "grid", "k": 3}),
    ("cone_of", {"base": "two_lines_braced"}),
]


def catalog_label(name: str, params: dict) -> str:
    if not params:
        return name
    return name + "(" + ",".join(f"{k}={v}" for k, v in params.items()) + ")"


def full_gallery() -> list[tuple[str, Framework]]:
    return [(catalog_label(n, p), generate(n, **dict(p))) for n, p in CATALOG]


# -- seeded random frameworks for property tests -------------------------------


def random_framework(rng: np.random.Generator, n: int = None, d: int = None) -> Framework:
    """Random points with a random connected graph of moderate density."""
    d = int(rng.integers(2, 4)) if d is None else d
    n = int(rng.integers(d + 2, d + 7)) if n is None else n
    pts = rng.normal(size=(n, d))
    while True:
        p = rng.uniform(0.35, 0.9)
        pairs = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
        if is_connected(n, pairs):
            return Framework(Graph(n, pairs), pts)


def random_structured_framework(rng: np.random.Generator) -> Framework:
    """Random frameworks biased toward conics and ruledness (lines, two directions, cones)."""
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return random_framework(rng)
    if kind == 1:
        # points on random lines through a common point, complete per line
        d = int(rng.integers(2, 4))
        nlines = int(rng.integers(d, d + 3))
        pts = [np.zeros(d)]
        groups = []
        for _ in range(nlines):
            u = rng.normal(size=d)
            g = [0]
            for tt in rng.uniform(0.5, 3.0, size=2) * rng.choice([-1, 1], size=2):
                g.append(len(pts))
                pts.append(tt * u)
            groups.append(g)
        return Framework.from_edges(pts, _complete_on(groups))
    if kind == 2:
        # random subgrid of a skewed lattice: edges in two directions only
        k = int(rng.integers(3, 5))
        shear = rng.normal(size=(2, 2)) + 2 * np.eye(2)
        f = grid(k)
        return f.with_points(f.points @ shear.T)
    base = random_framework(rng, d=2)
    return cone(base, apex_height=float(rng.uniform(0.5, 2.0))).framework
