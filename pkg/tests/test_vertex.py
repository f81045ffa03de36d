import numpy as np
import pytest
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection

from conftest import random_polyhedron
from polyco.errors import DimensionCapExceeded, EmptyPolyhedron
from polyco.polyhedron import Coord, Polyhedron
from polyco.vertex import enumerate_vertices, hull_membership


def _sorted_rows(A):
    A = np.round(np.asarray(A, float), 9)
    return A[np.lexsort(A.T[::-1])]


def test_unit_square():
    P = Polyhedron(["x", "y"], [[-1, 0], [0, -1]], [-1, -1])
    V = enumerate_vertices(P)
    assert _sorted_rows(V.vertices).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert V.rays.shape == (0, 2)


def test_simplex_complement():
    V = enumerate_vertices(Polyhedron(["x1", "x2"], [[1, 1]], [1]))
    assert _sorted_rows(V.vertices).tolist() == [[0, 1], [1, 0]]
    assert _sorted_rows(V.rays).tolist() == [[0, 1], [1, 0]]


def test_line_as_ray_pair():
    P = Polyhedron([Coord("x", nonneg=False), "y"], [[0, 1]], [1])
    V = enumerate_vertices(P)
    assert len(V.vertices) == 1
    assert V.vertices[0][1] == pytest.approx(1.0)
    R = _sorted_rows(V.rays)
    assert [-1, 0] in R.tolist() and [1, 0] in R.tolist()


def test_dimension_cap():
    P = Polyhedron([f"x{i}" for i in range(9)])
    with pytest.raises(DimensionCapExceeded):
        enumerate_vertices(P)
    enumerate_vertices(P, cap=9)


def test_empty_raises():
    with pytest.raises(EmptyPolyhedron):
        enumerate_vertices(Polyhedron(["x"], [[-1]], [1]))


def test_gripper_query_vertices():
    from polyco.bench.gripper import QUERY, build_gripper
    from polyco.lcdp import compose_compositional
    from polyco.ldp import query_polyhedron
    from polyco.molp import dominance_filter

    ldp = compose_compositional(build_gripper())
    V = enumerate_vertices(query_polyhedron(ldp, QUERY)).vertices
    front = dominance_filter(V)
    assert len(front) == 3


@pytest.mark.parametrize("seed", range(25))
def test_bounded_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    P, x0 = random_polyhedron(rng, bounded=True)
    V = _sorted_rows(enumerate_vertices(P).vertices)
    M = np.vstack([P.M, np.eye(P.dim)[P.nonneg]])
    m = np.concatenate([P.m, np.zeros(int(P.nonneg.sum()))])
    # scipy form: A x + b <= 0
    nz = np.abs(M).max(axis=1) > 0
    hs = np.hstack([-M[nz], m[nz, None]])
    W = HalfspaceIntersection(hs, x0).intersections
    assert np.all(np.isfinite(W))
    W = _sorted_rows(W)
    uniq = [W[0]]
    for w in W[1:]:
        if np.abs(w - uniq[-1]).max() > 1e-7:
            uniq.append(w)
    # HalfspaceIntersection may repeat degenerate vertices; compare as sets
    for w in uniq:
        assert np.min(np.abs(V - w).max(axis=1)) < 1e-7
    for v in V:
        assert np.min(np.abs(np.array(uniq) - v).max(axis=1)) < 1e-7


def test_vertices_satisfy_rows(rng):
    for _ in range(20):
        P, _ = random_polyhedron(rng)
        V = enumerate_vertices(P)
        for v in V.vertices:
            assert P.contains(v, tol=1e-8)
            # a vertex makes at least dim rows tight (flags included)
            M = np.vstack([P.M, np.eye(P.dim)[P.nonneg]])
            m = np.concatenate([P.m, np.zeros(int(P.nonneg.sum()))])
            tight = np.abs(M @ v - m) <= 1e-7 * (1 + np.abs(m))
            assert np.linalg.matrix_rank(M[tight]) == P.dim - _lineality_dim(V)
        for r in V.rays:
            assert np.all(np.asarray(P.M) @ r >= -1e-9)


def _lineality_dim(V):
    R = V.rays
    if R.size == 0:
        return 0
    lines = [r for r in R if np.any(np.abs(R + r).max(axis=1) < 1e-9)]
    return 0 if not lines else np.linalg.matrix_rank(np.array(lines))


def test_hull_membership():
    V = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert hull_membership(V, np.zeros((0, 2)), [0.2, 0.2])
    assert not hull_membership(V, np.zeros((0, 2)), [0.8, 0.8])
    assert hull_membership(V, np.array([[1.0, 1.0]]), [5.0, 5.0])
