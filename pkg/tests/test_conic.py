import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conicrig.conic import (AT_INFINITY, EMPTY, ConePointSpace, classify_quadric, conic_restriction, conic_space,
                            evaluate, in_span, is_cone_point, is_cone_point_by_lines, is_ruled, line_on_quadric,
                            line_samples, quadric_from_parts, ruling_quadric_space)
from conicrig.framework import Framework
from conicrig.gallery import full_gallery, grid, hyperbolic_paraboloid, two_lines_braced

XY = np.array([[0.0, 0.5], [0.5, 0.0]])
SADDLE = quadric_from_parts(np.array([[0, -0.5, 0], [-0.5, 0, 0], [0, 0, 0]]), [0, 0, 1], 0)  # z - xy
CONE3 = np.diag([1.0, 1.0, -1.0, 0.0])  # x^2 + y^2 - z^2
CIRCLE = quadric_from_parts(np.eye(2), None, -1.0)


def _parallel(A, B):
    a, b = A / np.linalg.norm(A), B / np.linalg.norm(B)
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b)) < 1e-9


def test_conic_space_grid():
    f = grid(3)
    assert oracles.conic_dim(f.points.tolist(), list(f.edges)) == 1
    (Q,) = conic_space(f)
    assert _parallel(Q, XY)
    assert abs(np.linalg.norm(Q) - 1) < 1e-12 and Q[0, 1] > 0


def test_conic_space_triangle_and_single_edge():
    tri = Framework.from_edges([(0, 0), (3, 1), (1, 4)], [(0, 1), (0, 2), (1, 2)])
    assert oracles.conic_dim(tri.points.tolist(), list(tri.edges)) == 0
    assert conic_space(tri) == []
    assert oracles.conic_dim([(0, 0), (1, 0)], [(0, 1)]) == 2
    assert len(conic_space(np.array([[1.0, 0.0]]))) == 2
    single = Framework.from_edges([(0, 0), (1, 0)], [(0, 1)], full_span=False)
    assert len(conic_space(single)) == 2


def test_ruling_space_examples():
    xy_hat = quadric_from_parts(XY)
    (Qh,) = ruling_quadric_space(two_lines_braced())
    assert _parallel(Qh, xy_hat)
    f = grid(3)
    assert oracles.ruling_dim(f.points.tolist(), list(f.edges)) == 0
    assert ruling_quadric_space(f) == []
    (Qh,) = ruling_quadric_space(hyperbolic_paraboloid(3, 3))
    assert _parallel(Qh, SADDLE)


def test_is_ruled_examples():
    assert not is_ruled(grid(3))
    assert is_ruled(two_lines_braced())
    assert is_ruled(hyperbolic_paraboloid(3, 3))


def test_classify_two_lines():
    c = classify_quadric(np.diag([1.0, -1.0, 0.0]))
    assert c.rank == 2 and not c.is_smooth and c.indefinite
    assert isinstance(c.cone_points, ConePointSpace)
    assert c.cone_points.dimension == 0 == 2 - c.rank
    np.testing.assert_allclose(c.cone_points.base, [0, 0], atol=1e-12)


def test_classify_saddle_and_cone():
    c = classify_quadric(SADDLE)
    assert c.rank == 4 and c.is_smooth and c.cone_points == EMPTY
    # eigen-oracle: z - xy has eigenvalues +-1/2 (xy block) and +-1/2 (z, 1 block)
    np.testing.assert_allclose(sorted(np.linalg.eigvalsh(SADDLE)), [-0.5, -0.5, 0.5, 0.5], atol=1e-12)
    c = classify_quadric(CONE3)
    assert c.rank == 3 and c.cone_points.dimension == 0
    np.testing.assert_allclose(c.cone_points.base, [0, 0, 0], atol=1e-12)


def test_classify_planes_pair_and_infinity():
    planes = quadric_from_parts(np.array([[0, 0, 0], [0, 0, 0.5], [0, 0.5, 0]]))  # yz = 0
    c = classify_quadric(planes)
    assert c.rank == 2 and c.cone_points.dimension == 1 == 3 - c.rank
    # parabola y = x^2: kernel empty; pair of parallel lines x^2 = 1: singular point at infinity
    assert classify_quadric(quadric_from_parts(np.diag([1.0, 0.0]), [0, -1])).cone_points == EMPTY
    assert classify_quadric(quadric_from_parts(np.diag([1.0, 0.0]), None, -1)).cone_points == AT_INFINITY
    assert not classify_quadric(np.diag([1.0, 1.0, 0.0])).indefinite
    with pytest.raises(ValueError):
        classify_quadric(np.zeros((3, 3)))


def test_is_cone_point_examples(rng):
    xy_hat = quadric_from_parts(XY)
    assert is_cone_point(xy_hat, [0, 0])
    assert not is_cone_point(xy_hat, [1, 0])
    assert is_cone_point(CONE3, [0, 0, 0])
    with pytest.raises(ValueError):
        is_cone_point(xy_hat, [1, 1])
    # line-based cross-check agrees with the kernel criterion
    assert is_cone_point_by_lines(xy_hat, [0, 0], rng)
    assert not is_cone_point_by_lines(xy_hat, [1, 0], rng)
    assert is_cone_point_by_lines(CONE3, [0, 0, 0], rng)


def test_line_on_quadric_examples():
    xy_hat = quadric_from_parts(XY)
    assert line_on_quadric(xy_hat, [0, 1], [0, -1])
    assert not line_on_quadric(CIRCLE, [1, 0], [0, 1])
    assert line_on_quadric(SADDLE, [1, 0, 0], [1, 1, 1])
    for Q, a, b in ((xy_hat, [0, 1], [0, -1]), (SADDLE, [1, 0, 0], [1, 1, 1])):
        assert np.max(np.abs(evaluate(Q, line_samples(a, b)))) < 1e-12


def test_conic_restriction_examples():
    assert _parallel(conic_restriction(quadric_from_parts(XY)), XY)
    assert conic_restriction(quadric_from_parts(np.zeros((2, 2)), [1.0, 2.0], 3.0)) is None
    Q = conic_restriction(SADDLE)
    assert _parallel(Q, np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 4))
def test_isotropic_line_through_two_quadric_points_lies_on_it(seed, d):
    rng = np.random.default_rng(seed)
    # random quadric, point x1 on it, direction e isotropic for Q, x2 = x1 + e also on it
    Q = rng.normal(size=(d, d))
    Q = Q + Q.T
    w, V = np.linalg.eigh(Q)
    if w.min() > 0 or w.max() < 0:
        Q = Q - np.mean(w) * np.eye(d)
        w, V = np.linalg.eigh(Q)
    i, j = np.argmin(w), np.argmax(w)
    e = V[:, i] * np.sqrt(w[j]) + V[:, j] * np.sqrt(-w[i])
    assert abs(e @ Q @ e) < 1e-9 * np.linalg.norm(Q) * (e @ e)
    x1 = rng.normal(size=d)
    l = rng.normal(size=d)
    # choose l's component so that x2 = x1 + e is also on the quadric, then c so x1 is on it
    need = -(2 * x1 @ Q @ e)
    l = l + (need - l @ e) * e / (e @ e)
    c = -(x1 @ Q @ x1 + l @ x1)
    Qh = quadric_from_parts(Q, l, c)
    x2 = x1 + e
    scale = np.linalg.norm(Qh) * (1 + np.max(np.abs(line_samples(x1, x2)))) ** 2
    assert abs(evaluate(Qh, x2)) < 1e-8 * scale
    assert np.max(np.abs(evaluate(Qh, line_samples(x1, x2)))) < 1e-8 * scale


GALLERY = full_gallery()


@pytest.mark.parametrize("name, f", GALLERY, ids=[g[0] for g in GALLERY])
def test_ruled_implies_conic(name, f):
    conics = conic_space(f)
    for Qh in ruling_quadric_space(f):
        Q = conic_restriction(Qh)
        if Q is not None:
            assert in_span(Q, conics)


@pytest.mark.parametrize("name, f", GALLERY, ids=[g[0] for g in GALLERY])
def test_dimension_law_on_ruling_quadrics(name, f):
    for Qh in ruling_quadric_space(f):
        c = classify_quadric(Qh)
        assert c.indefinite
        if isinstance(c.cone_points, ConePointSpace):
            assert c.cone_points.dimension == f.d - c.rank


def _full_span_neighborhoods(f):
    out = []
    for i in range(f.n):
        nb = f.graph.closed_neighborhood(i)
        pts = f.points[nb] - f.points[nb].mean(axis=0)
        if np.linalg.matrix_rank(pts, tol=1e-9) == f.d:
            out.append(i)
    return out


@pytest.mark.parametrize("name, f", GALLERY, ids=[g[0] for g in GALLERY])
def test_many_cone_points_forbid_ruling(name, f):
    cands = _full_span_neighborhoods(f)
    # look for d candidates in general affine position (affinely independent)
    from itertools import combinations
    for combo in combinations(cands, f.d):
        pts = f.points[list(combo)]
        if f.d == 1 or np.linalg.matrix_rank(pts[1:] - pts[0], tol=1e-9) == f.d - 1:
            assert not is_ruled(f)
            return


@pytest.mark.parametrize("name, f", GALLERY, ids=[g[0] for g in GALLERY])
def test_vertices_with_full_ruling_directions_are_cone_points(name, f):
    for Qh in ruling_quadric_space(f):
        for i in range(f.n):
            dirs = np.array([f.points[j] - f.points[i] for j in f.graph.neighbors(i)])
            if np.linalg.matrix_rank(dirs, tol=1e-9) == f.d:
                assert is_cone_point(Qh, f.points[i])
