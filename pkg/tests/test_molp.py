import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_monotone_ldp
from oracles import brute_vertices_2d, scipy_weighted_min, weighted_sum_sweep
from polyco.errors import EmptyFeasible, UnboundedObjective
from polyco.ldp import _query_polyhedron
from polyco.molp import (
    MolpProblem,
    UpperImage,
    _dominance_oracle,
    dominance_filter,
    solve_molp,
)
from polyco.polyhedron import Coord, Polyhedron


def _query(ldp, f):
    P = _query_polyhedron(ldp, f, "fun")
    return P, solve_molp(MolpProblem(np.eye(P.dim), P))


def mutually_nondominated(V, tol=1e-9):
    for i, a in enumerate(V):
        for j, b in enumerate(V):
            if i != j and np.all(b <= a + tol) and np.any(b < a - tol):
                return False
    return True


def scalarization_complete(V, P, C, rng, n=100):
    for _ in range(n):
        w = rng.uniform(0.01, 1.0, V.shape[1])
        ref = scipy_weighted_min(w @ C, P)
        if abs(float((V @ w).min()) - ref) > 1e-6 * (1 + abs(ref)):
            return False
    return True


def test_two_vertices_orthant_rays():
    P = Polyhedron(["r1", "r2"], [[1, 1]], [1])
    ui = solve_molp(MolpProblem(np.eye(2), P))
    assert ui.vertices.tolist() == [[0.0, 1.0], [1.0, 0.0]]
    assert ui.rays.tolist() == [[1.0, 0.0], [0.0, 1.0]]


def test_bi_objective_sorting(rng):
    for _ in range(10):
        ldp = random_monotone_ldp(rng)
        P, ui = _query(ldp, rng.uniform(0, 2, 2))
        V = ui.vertices
        assert np.all(np.diff(V[:, 0]) > 0)
        assert np.all(np.diff(V[:, 1]) < 0)


def test_empty_and_unbounded():
    P = Polyhedron(["x"], [[1.0], [-1.0]], [1.0, 0.0])
    with pytest.raises(EmptyFeasible):
        solve_molp(MolpProblem(np.eye(1), P))
    Q = Polyhedron([Coord("x", nonneg=False), "y"], [[0.0, 1.0]], [0.0])
    with pytest.raises(UnboundedObjective) as ei:
        solve_molp(MolpProblem(np.eye(2), Q))
    assert ei.value.ray[0] < 0


def test_max_sense_rays_point_down():
    P = Polyhedron(["x", "y"], [[-1, -1]], [-1])
    ui = solve_molp(MolpProblem(np.eye(2), P, "max"))
    assert sorted(map(tuple, ui.vertices)) == [(0.0, 1.0), (1.0, 0.0)]
    assert np.array_equal(ui.rays, -np.eye(2))


def test_mixed_sense():
    P = Polyhedron(["x", "y"], [[-1, 0], [0, 1]], [-2, 1])
    ui = solve_molp(MolpProblem(np.eye(2), P, ("max", "min")))
    assert ui.vertices.tolist() == [[2.0, 1.0]]


def test_three_objectives_simplex():
    P = Polyhedron(["a", "b", "c"], [[1, 1, 1]], [1])
    ui = solve_molp(MolpProblem(np.eye(3), P))
    assert sorted(map(tuple, np.round(ui.vertices, 12))) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


@pytest.mark.parametrize("seed", range(15))
def test_q2_random_ldp_queries(seed):
    rng = np.random.default_rng(seed)
    ldp = random_monotone_ldp(rng)
    f = rng.uniform(0, 2, 2)
    P, ui = _query(ldp, f)
    V = ui.vertices
    assert mutually_nondominated(V)
    assert scalarization_complete(V, P, np.eye(2), rng)
    cand = brute_vertices_2d(np.asarray(P.M), np.asarray(P.m))
    sweep = weighted_sum_sweep(cand)
    assert sweep.shape == V.shape
    assert np.abs(sweep - V).max() <= 1e-8 * (1 + np.abs(V).max())


@pytest.mark.parametrize("seed", range(6))
def test_q3_benson(seed):
    rng = np.random.default_rng(100 + seed)
    ldp = random_monotone_ldp(rng, n_F=2, n_R=3, rows=4)
    P, ui = _query(ldp, rng.uniform(0, 2, 2))
    V = ui.vertices
    assert mutually_nondominated(V)
    assert scalarization_complete(V, P, np.eye(3), rng, n=100)


def test_preimages_map_to_vertices(rng):
    ldp = random_monotone_ldp(rng, rows=5)
    P, ui = _query(ldp, [1.0, 1.0])
    for x, v in zip(ui.preimages, ui.vertices):
        assert P.contains(x)
        assert x == pytest.approx(v, abs=1e-9)


def test_dominance_filter_examples():
    assert dominance_filter([(1, 0), (0, 1), (1, 1)]).tolist() == [[1, 0], [0, 1]]
    assert dominance_filter([(3, 4)]).tolist() == [[3, 4]]
    assert dominance_filter([(1, 1), (1, 1), (0, 2)]).tolist() == [[1, 1], [0, 2]]


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 3)), min_size=1, max_size=40))
def test_dominance_filter_matches_oracle(pts):
    got = dominance_filter(np.array(pts, float))
    assert np.array_equal(got, _dominance_oracle(pts))


def test_dominance_filter_rover_grid():
    from polyco.bench import rover
    from polyco.bench.metrics import reference_frontier

    # coarse grid, all feasible samples (not just the per-column minima)
    g = np.linspace(0, 1864, 60)
    h = np.linspace(770, 830, 60)
    X = np.array([(a, b) for a in g for b in h])
    X = X[rover.feasible(X)]
    assert np.array_equal(dominance_filter(X), _dominance_oracle(X))
    R = reference_frontier(rover.feasible, rover.REF_BOX, (60, 60))
    assert len(R) == len(dominance_filter(X))


def test_upper_image_json_csv():
    ui = UpperImage(np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(2), 1e-7)
    d = json.loads(ui.to_json())
    assert set(d) == {"vertices", "rays", "tol"}
    back = UpperImage.from_json(ui.to_json())
    assert np.array_equal(back.vertices, ui.vertices) and back.tol == ui.tol
    lines = ui.to_csv(header=["a", "b"]).strip().splitlines()
    assert lines[0] == "a,b" and len(lines) == 3
