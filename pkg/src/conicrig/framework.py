"""Bar-joint frameworks, edge geometry and equilibrium stresses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .numerics import DEFAULT_TOL, SignatureTriple, Tolerance, eigen_signature, matrix_rank, nullspace


class FrameworkError(ValueError):
    pass


def _normalize_edges(n: int, edges: Iterable[Sequence[int]]) -> tuple[tuple[int, int], ...]:
    out = []
    seen = set()
    for e in edges:
        i, j = (int(v) for v in e)
        if i == j:
            raise FrameworkError(f"self-loop at vertex {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise FrameworkError(f"edge ({i}, {j}) out of range for {n} vertices")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise FrameworkError(f"duplicate edge {key}")
        seen.add(key)
        out.append(key)
    return tuple(out)


def is_connected(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    if n == 1:
        return True
    if not edges:
        return False
    ij = np.asarray(edges)
    adj = coo_matrix((np.ones(len(ij)), (ij[:, 0], ij[:, 1])), shape=(n, n))
    ncomp, _ = connected_components(adj, directed=False)
    return ncomp == 1


@dataclass(frozen=True)
class Graph:
    """Connected simple graph on vertices ``0..n-1``; edges stored as (i, j), i < j."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        n = int(n)
        if n < 2:
            raise FrameworkError("a graph needs at least 2 vertices")
        normalized = _normalize_edges(n, edges)
        if not is_connected(n, normalized):
            raise FrameworkError("graph is not connected")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", normalized)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> list[int]:
        return [b if a == i else a for a, b in self.edges if i in (a, b)]

    def closed_neighborhood(self, i: int) -> list[int]:
        return sorted([i, *self.neighbors(i)])

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: k for k, e in enumerate(self.edges)}


def affine_rank(points, tol: Tolerance = DEFAULT_TOL) -> int:
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return 0
    centered = pts - pts.mean(axis=0)
    return matrix_rank(centered, tol)


@dataclass(frozen=True)
class Framework:
    """A graph with one point per vertex in E^d.

    Construction checks that the points are finite, that adjacent vertices do
    not coincide and, unless ``full_span=False``, that the configuration has a
    full d-dimensional affine span.
    """

    graph: Graph
    points: np.ndarray = field(repr=False)

    def __init__(self, graph: Graph, points, *, full_span: bool = True, tol: Tolerance = DEFAULT_TOL):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise FrameworkError("points must be an n x d array")
        if not np.all(np.isfinite(pts)):
            raise FrameworkError("coordinates must be finite")
        if pts.shape[0] != graph.n:
            raise FrameworkError(f"graph has {graph.n} vertices but {pts.shape[0]} points were given")
        scale = max(1.0, float(np.max(np.abs(pts))))
        for i, j in graph.edges:
            if np.linalg.norm(pts[j] - pts[i]) <= tol.scale(scale):
                raise FrameworkError(f"adjacent vertices {i} and {j} coincide")
        if full_span and affine_rank(pts, tol) != pts.shape[1]:
            raise FrameworkError(
                f"configuration does not have a full {pts.shape[1]}-dimensional affine span"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_edges(cls, points, edges, **kwargs) -> "Framework":
        pts = np.asarray(points, dtype=float)
        return cls(Graph(len(pts), edges), pts, **kwargs)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.graph.edges

    def with_points(self, points, **kwargs) -> "Framework":
        return Framework(self.graph, points, **kwargs)


def edge_vectors(f: Framework) -> np.ndarray:
    """Rows ``p_j - p_i`` for each stored edge (i, j), i < j."""
    if not f.edges:
        return np.zeros((0, f.d))
    ij = np.asarray(f.edges)
    return f.points[ij[:, 1]] - f.points[ij[:, 0]]


def squared_lengths(f: Framework) -> np.ndarray:
    ev = edge_vectors(f)
    return np.einsum("ij,ij->i", ev, ev)


def is_equivalent(f1: Framework, f2: Framework, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Same squared edge lengths, edge by edge. Dimensions may differ."""
    if f1.graph != f2.graph:
        raise FrameworkError("frameworks have different graphs")
    l1, l2 = squared_lengths(f1), squared_lengths(f2)
    return bool(np.all(np.abs(l1 - l2) <= np.maximum(tol.relative_cutoff * np.maximum(l1, l2), tol.absolute_floor)))


# -- stresses ---------------------------------------------------------------


def assemble_stress(g: Graph, weights) -> np.ndarray:
    """Stress matrix with off-diagonal entry ``w_e`` on each edge and zero row sums."""
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != g.m:
        raise FrameworkError(f"expected {g.m} edge weights, got {w.size}")
    omega = np.zeros((g.n, g.n))
    if g.m:
        ij = np.asarray(g.edges)
        omega[ij[:, 0], ij[:, 1]] = w
        omega[ij[:, 1], ij[:, 0]] = w
    omega[np.diag_indices(g.n)] = -omega.sum(axis=1)
    return omega


def edge_weights(g: Graph, omega) -> np.ndarray:
    """Read back the per-edge off-diagonal entries of a stress matrix."""
    omega = np.asarray(omega, dtype=float)
    if not g.m:
        return np.zeros(0)
    ij = np.asarray(g.edges)
    return omega[ij[:, 0], ij[:, 1]].copy()


def equilibrium_matrix(f: Framework) -> np.ndarray:
    """Linear map from edge weights to the stacked vertex force residuals.

    Row block ``i`` holds ``sum_j w_ij (p_i - p_j)``; its nullspace is the
    space of equilibrium stresses written in edge coordinates.
    """
    n, d = f.n, f.d
    E = np.zeros((n * d, f.graph.m))
    for k, (i, j) in enumerate(f.edges):
        diff = f.points[i] - f.points[j]
        E[i * d:(i + 1) * d, k] = diff
        E[j * d:(j + 1) * d, k] = -diff
    return E


def stress_space_weights(f: Framework, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns, edge coordinates) of the equilibrium stress space."""
    if not f.graph.m:
        return np.zeros((0, 0))
    return nullspace(equilibrium_matrix(f), tol)


def stress_space_basis(f: Framework, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    W = stress_space_weights(f, tol)
    return [assemble_stress(f.graph, W[:, k]) for k in range(W.shape[1])]


class StressCheck(NamedTuple):
    is_equilibrium: bool
    rank: int
    signature: SignatureTriple


def equilibrium_residual(omega, f: Framework) -> float:
    omega = np.asarray(omega, dtype=float)
    P = np.column_stack([f.points, np.ones(f.n)])
    return float(np.linalg.norm(omega @ P))


def supported_on(omega, g: Graph, tol: Tolerance = DEFAULT_TOL) -> bool:
    omega = np.asarray(omega, dtype=float)
    mask = np.ones_like(omega, dtype=bool)
    np.fill_diagonal(mask, False)
    for i, j in g.edges:
        mask[i, j] = mask[j, i] = False
    scale = tol.scale(np.max(np.abs(omega)) if omega.size else 0.0)
    return bool(np.all(np.abs(omega[mask]) <= scale))


def check_stress(omega, f: Framework, tol: Tolerance = DEFAULT_TOL) -> StressCheck:
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (f.n, f.n):
        raise FrameworkError(f"stress has shape {omega.shape}, framework has {f.n} vertices")
    P = np.column_stack([f.points, np.ones(f.n)])
    size = np.linalg.norm(omega) * max(1.0, np.linalg.norm(P))
    ok = np.linalg.norm(omega @ P) <= tol.scale(size) and supported_on(omega, f.graph, tol)
    sig = eigen_signature(omega, tol)
    return StressCheck(bool(ok), sig.rank, sig)
