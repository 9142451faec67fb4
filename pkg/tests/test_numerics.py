import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_psd, random_rotation
from conicrig.numerics import (SignatureTriple, Tolerance, eigen_signature, psd_project, rank_nullspace,
                               sqrt_psd)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(relative_cutoff=0)
    with pytest.raises(ValueError):
        Tolerance(absolute_floor=-1)
    with pytest.raises(ValueError):
        Tolerance(relative_cutoff=1.5)


def test_rank_nullspace_identity():
    r, N = rank_nullspace(np.eye(3))
    assert r == 3 and N.shape == (3, 0)


def test_rank_nullspace_ones():
    r, N = rank_nullspace(np.ones((2, 2)))
    assert r == 1
    v = N[:, 0] * np.sign(N[0, 0])
    np.testing.assert_allclose(v, np.array([1, -1]) / np.sqrt(2), atol=1e-12)


def test_rank_nullspace_zero():
    r, N = rank_nullspace(np.zeros((2, 2)))
    assert r == 0 and N.shape == (2, 2)


def test_rank_nullspace_rejects_nan():
    with pytest.raises(ValueError):
        rank_nullspace(np.array([[1.0, np.nan]]))


@pytest.mark.parametrize(
    "M, expected",
    [
        (np.diag([2.0, -3.0, 0.0]), (1, 1, 1)),
        (np.eye(5), (0, 0, 5)),
        (np.array([[0.0, 1.0], [1.0, 0.0]]), (1, 0, 1)),
    ],
)
def test_eigen_signature_examples(M, expected):
    assert eigen_signature(M) == SignatureTriple(*expected)


def test_psd_project_examples(rng):
    P = random_psd(rng, 4, 2)
    assert np.linalg.norm(psd_project(P) - P) < 1e-10
    np.testing.assert_allclose(psd_project(np.diag([1.0, -2.0])), np.diag([1.0, 0.0]), atol=1e-15)
    assert not np.any(psd_project(np.zeros((3, 3))))


def test_sqrt_psd_examples(rng):
    np.testing.assert_allclose(sqrt_psd(np.eye(3)), np.eye(3), atol=1e-14)
    np.testing.assert_allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)
    M = random_psd(rng, 6)
    R = sqrt_psd(M)
    assert np.linalg.norm(R @ R - M) < 1e-9


def test_sqrt_psd_rejects_indefinite():
    with pytest.raises(ValueError):
        sqrt_psd(np.diag([1.0, -1.0]))


matrices = st.integers(0, 2**31 - 1).map(np.random.default_rng)


@settings(max_examples=60, deadline=None)
@given(matrices, st.integers(1, 8), st.integers(1, 8), st.integers(0, 8))
def test_rank_plus_nullity(rng, m, n, r):
    r = min(r, m, n)
    M = rng.normal(size=(m, r)) @ rng.normal(size=(r, n))
    rank, N = rank_nullspace(M)
    assert rank == r
    assert rank + N.shape[1] == n
    np.testing.assert_allclose(N.T @ N, np.eye(N.shape[1]), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(matrices, st.integers(1, 7))
def test_signature_orthogonal_congruence(rng, n):
    neg, zero = rng.integers(0, n + 1), 0
    zero = int(rng.integers(0, n - neg + 1))
    diag = np.concatenate([-rng.uniform(0.5, 2, neg), np.zeros(zero), rng.uniform(0.5, 2, n - neg - zero)])
    R = random_rotation(rng, n)
    M = R @ np.diag(diag) @ R.T
    assert eigen_signature(M) == eigen_signature(np.diag(diag)) == (neg, zero, n - neg - zero)


@settings(max_examples=60, deadline=None)
@given(matrices, st.integers(1, 10))
def test_psd_project_idempotent(rng, n):
    A = rng.normal(size=(n, n))
    P = psd_project(A + A.T)
    assert np.linalg.eigvalsh(P).min() > -1e-12
    assert np.linalg.norm(psd_project(P) - P) < 1e-10
