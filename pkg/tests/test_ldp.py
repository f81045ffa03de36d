import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_monotone_ldp
from oracles import sample_box
from polyco.errors import DimensionMismatch, EmptyFeasible, EmptyPolyhedron, NotMonotone
from polyco.ldp import (
    Ldp,
    check_monotone,
    molp_as_ldp,
    new_ldp,
    query_max_functionalities,
    query_min_resources,
    query_polyhedron,
)
from polyco.molp import MolpProblem, solve_molp
from polyco.polyhedron import Polyhedron


@pytest.fixture
def motor():
    return new_ldp(["f_grasp"], ["m_mot", "c_mot"], [[-1.0]], [[400.0, 0.6]], [0.0])


def test_motor_accepted(motor):
    assert check_monotone(motor)
    assert motor.nrows == 1 and motor.n_F == 1 and motor.n_R == 2


def test_positive_fun_entry_rejected():
    with pytest.raises(NotMonotone) as ei:
        new_ldp(["f"], ["r"], [[1.0]], [[-1.0]], [0.0])
    assert ei.value.row == 0 and ei.value.column == 0


def test_negative_res_entry_reports_column():
    with pytest.raises(NotMonotone) as ei:
        new_ldp(["f"], ["r1", "r2"], [[-1.0]], [[1.0, -1.0]], [0.0])
    assert ei.value.column == 2


def test_zero_rows_full_orthant():
    L = new_ldp(["f"], ["r1", "r2"], np.zeros((0, 1)), np.zeros((0, 2)), [])
    ui = query_min_resources(L, [3.0])
    assert ui.vertices.tolist() == [[0.0, 0.0]]
    assert np.array_equal(ui.rays, np.eye(2))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        new_ldp(["f"], ["r"], [[-1.0, 0.0]], [[1.0]], [0.0])
    L = new_ldp(["f"], ["r"], [[-1.0]], [[1.0]], [0.0])
    with pytest.raises(DimensionMismatch):
        query_min_resources(L, [1.0, 2.0])


def test_gripper_workspace_row():
    L = Ldp(["f_ws"], ["L_Al", "L_CF"], [[-1.0]], [[0.35, 0.35]], [0.0])
    assert check_monotone(L)


def test_redundant_row_after_removal():
    # f <= r and f <= 2r; the second is implied and both pass the sign test
    L = Ldp(["f"], ["r"], [[-1.0], [-1.0]], [[1.0], [2.0]], [0.0, 0.0])
    assert check_monotone(L)


def test_reverse_relation_not_monotone():
    L = Ldp(["f"], ["r"], [[1.0]], [[-1.0]], [0.0], check=False)
    assert not check_monotone(L)


def test_redundant_bad_row_is_ignored():
    # f >= -1 holds on the whole orthant, so its positive A_F entry is harmless
    L = Ldp(["f"], ["r"], [[-1.0], [1.0]], [[1.0], [0.0]], [0.0, -1.0], check=False)
    assert check_monotone(L)


def test_check_monotone_empty():
    L = Ldp(["f"], ["r"], [[0.0], [0.0]], [[1.0], [-1.0]], [2.0, -1.0], check=False)
    with pytest.raises(EmptyPolyhedron):
        check_monotone(L)


def test_motor_min_resources(motor):
    ui = query_min_resources(motor, [100.0])
    assert ui.vertices == pytest.approx(np.array([[0.0, 500.0 / 3.0], [0.25, 0.0]]), abs=1e-9)
    assert np.array_equal(ui.rays, np.eye(2))


def test_zero_demand_gives_origin(rng):
    for _ in range(5):
        L = random_monotone_ldp(rng)
        L = Ldp(L.fun_ports, L.res_ports, L.A_F, L.A_R, -np.abs(L.b))
        ui = query_min_resources(L, np.zeros(L.n_F))
        assert ui.vertices.tolist() == [[0.0] * L.n_R]


def test_motor_max_functionality(motor):
    ui = query_max_functionalities(motor, [0.25, 0.0])
    assert ui.vertices == pytest.approx(np.array([[100.0]]))
    assert np.array_equal(ui.rays, -np.eye(1))


def test_max_functionality_empty():
    L = Ldp(["f"], ["r"], [[0.0]], [[1.0]], [1.0])
    with pytest.raises(EmptyFeasible):
        query_max_functionalities(L, [0.0])


def test_min_resources_empty():
    # the demand f exceeds what any resource can provide
    L = Ldp(["f"], ["r"], [[-1.0], [-1.0]], [[1.0], [0.0]], [0.0, -2.0])
    with pytest.raises(EmptyFeasible):
        query_min_resources(L, [3.0])


def test_symmetric_max():
    L = Ldp(["f1", "f2"], ["r"], [[-1.0, -1.0]], [[1.0]], [0.0])
    ui = query_max_functionalities(L, [1.0])
    assert sorted(map(tuple, ui.vertices)) == [(0.0, 1.0), (1.0, 0.0)]


def test_molp_as_ldp_round_trip():
    L = molp_as_ldp([[1.0, 1.0]], [1.0])
    ui = query_min_resources(L, [0.0])
    assert ui.vertices.tolist() == [[0.0, 1.0], [1.0, 0.0]]
    E = molp_as_ldp(np.zeros((0, 2)), [])
    assert query_min_resources(E, [0.0]).vertices.tolist() == [[0.0, 0.0]]


@pytest.mark.parametrize("seed", range(5))
def test_molp_as_ldp_random(seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, 4, size=(3, 2)).astype(float)
    A[np.all(A == 0, axis=1), 0] = 1.0
    b = rng.integers(0, 5, size=3).astype(float)
    direct = solve_molp(MolpProblem(np.eye(2), Polyhedron(["r1", "r2"], A, b)))
    via = query_min_resources(molp_as_ldp(A, b), [0.0])
    assert np.abs(direct.vertices - via.vertices).max() <= 1e-9


@given(st.integers(0, 10_000))
def test_query_sets_nested(seed):
    rng = np.random.default_rng(seed)
    L = random_monotone_ldp(rng)
    f = rng.uniform(0, 2, L.n_F)
    g = f + rng.uniform(0, 1, L.n_F)
    P, Q = query_polyhedron(L, f), query_polyhedron(L, g)
    if Q.is_empty():
        return
    X = sample_box(Q, rng, 200, pad=2.0)
    X = np.abs(X)
    inQ = Q.contains_many(X)
    assert np.all(P.contains_many(X[inQ]))


@given(st.integers(0, 10_000))
def test_query_recession_is_orthant(seed):
    rng = np.random.default_rng(seed)
    L = random_monotone_ldp(rng)
    f = rng.uniform(0, 2, L.n_F)
    try:
        ui = query_min_resources(L, f)
    except EmptyFeasible:
        return
    assert np.array_equal(ui.rays, np.eye(L.n_R))


def test_internal_coordinates_projection():
    # f <= u, u <= r: equivalent to f <= r
    L = Ldp(["f"], ["r"], [[-1.0], [0.0]], [[0.0], [1.0]], [0.0, 0.0],
            internal_ports=["u"], A_I=[[1.0], [-1.0]])
    assert check_monotone(L)
    P = query_polyhedron(L, [2.0])
    assert P.contains([2.0]) and not P.contains([1.9])
    ui = query_min_resources(L, [2.0])
    assert ui.vertices == pytest.approx(np.array([[2.0]]))


def test_json_round_trip(motor):
    back = Ldp.from_json(motor.to_json())
    assert back.fun_names == motor.fun_names and back.res_names == motor.res_names
    assert np.array_equal(back.A_R, motor.A_R) and np.array_equal(back.b, motor.b)
