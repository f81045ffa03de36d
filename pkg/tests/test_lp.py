import numpy as np
import pytest
from scipy.optimize import linprog

from polyco import _backend, _fallback
from polyco.lp import LpStatus, lexmin, solve_lp, solve_lp_arrays
from polyco.polyhedron import Coord, Polyhedron


def scipy_lp(c, M, m, nonneg):
    bounds = [(0, None) if nn else (None, None) for nn in nonneg]
    return linprog(c, A_ub=-M, b_ub=-m, bounds=bounds, method="highs")


def test_min_x_at_bound():
    r = solve_lp([1.0], Polyhedron(["x"], [[1.0]], [1.0]))
    assert r.status is LpStatus.OPTIMAL
    assert r.value == pytest.approx(1.0)
    assert r.x == pytest.approx([1.0])


def test_inconsistent_rows_infeasible():
    P = Polyhedron([Coord("x", nonneg=False)], [[1.0], [-1.0]], [1.0, 0.0])
    assert solve_lp([1.0], P).status is LpStatus.INFEASIBLE


def test_unbounded_ray_certifies():
    P = Polyhedron([Coord("x", nonneg=False), "y"], [[1.0, 1.0]], [1.0])
    r = solve_lp([1.0, 0.0], P)
    assert r.status is LpStatus.UNBOUNDED
    d = r.ray
    assert np.all(np.asarray(P.M) @ d >= -1e-9)
    assert d[1] >= -1e-12
    assert d[0] < 0


def test_max_sense():
    P = Polyhedron(["x", "y"], [[-1.0, -1.0]], [-2.0])
    r = solve_lp([1.0, 2.0], P, sense="max")
    assert r.value == pytest.approx(4.0)


def test_lexmin_simplex_corner():
    P = Polyhedron(["x1", "x2"], [[1.0, 1.0]], [1.0])
    assert lexmin([[1.0, 0.0], [0.0, 1.0]], P).x == pytest.approx([0.0, 1.0])
    assert lexmin([[0.0, 1.0], [1.0, 0.0]], P).x == pytest.approx([1.0, 0.0])


def test_lexmin_values_recorded():
    P = Polyhedron(["x1", "x2"], [[1.0, 1.0], [1.0, 3.0]], [1.0, 2.0])
    r = lexmin([[1.0, 1.0], [1.0, 0.0]], P)
    assert r.values[0] == pytest.approx(1.0)
    assert r.values[1] == pytest.approx(0.0, abs=1e-12)
    assert r.x == pytest.approx([0.0, 1.0])


@pytest.mark.parametrize("seed", range(60))
def test_matches_highs(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    k = int(rng.integers(1, 10))
    M = rng.normal(size=(k, n)).round(2)
    m = rng.normal(size=k).round(2)
    c = rng.normal(size=n).round(2)
    nn = rng.random(n) < 0.7
    ours = solve_lp_arrays(c, M, m, nn)
    ref = scipy_lp(c, M, m, nn)
    expected = {0: LpStatus.OPTIMAL, 2: LpStatus.INFEASIBLE, 3: LpStatus.UNBOUNDED}[ref.status]
    assert ours.status is expected
    if expected is LpStatus.OPTIMAL:
        assert ours.value == pytest.approx(ref.fun, abs=1e-7, rel=1e-7)
        # primal feasibility, dual feasibility, strong duality
        assert np.all(M @ ours.x >= m - 1e-7)
        assert np.all(ours.x[nn] >= -1e-9)
        y = ours.duals
        assert np.all(y >= -1e-9)
        red = c - M.T @ y
        assert np.all(np.abs(red[~nn]) <= 1e-7)
        assert np.all(red[nn] >= -1e-7)
        assert y @ m == pytest.approx(ours.value, abs=1e-6)
        # complementary slackness
        assert np.all(np.abs(y * (M @ ours.x - m)) <= 1e-6)


def test_deterministic():
    rng = np.random.default_rng(3)
    M = rng.normal(size=(8, 5))
    x0 = rng.uniform(0.0, 1.0, 5)
    m = M @ x0 - 0.1
    c = np.abs(rng.normal(size=5))
    a = solve_lp_arrays(c, M, m, np.ones(5, bool))
    b = solve_lp_arrays(c, M, m, np.ones(5, bool))
    assert a.status is LpStatus.OPTIMAL
    assert a.value == b.value
    assert np.array_equal(a.x, b.x)


def test_backends_agree():
    rng = np.random.default_rng(7)
    M = rng.uniform(0.1, 1.0, (30, 20))
    m = rng.uniform(0.5, 1.0, 30)
    c = rng.uniform(0.5, 1.5, 20)
    old = _backend.simplex_iterate
    try:
        _backend.simplex_iterate = _fallback.simplex_iterate
        slow = solve_lp_arrays(c, M, m, np.ones(20, bool))
    finally:
        _backend.simplex_iterate = old
    fast = solve_lp_arrays(c, M, m, np.ones(20, bool))
    assert slow.value == pytest.approx(fast.value, rel=1e-12)
    assert np.allclose(slow.x, fast.x)


def test_rover_weighted_optimum_on_frontier():
    from polyco.bench import rover
    from polyco.ldp import query_min_resources, query_polyhedron

    L = rover.surrogate(200)
    q = (0.1, 0.05)
    P = query_polyhedron(L, q)
    r = solve_lp([1.0, 1.0], P)
    V = query_min_resources(L, q).vertices
    assert r.value == pytest.approx(float((V @ [1.0, 1.0]).min()), rel=1e-9)
