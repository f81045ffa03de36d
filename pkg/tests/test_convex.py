import numpy as np
import pytest

from polyco.bench import rover
from polyco.convex import (
    ApproxReport,
    ConvexConstraint,
    excess,
    inflate,
    normalizer,
    outer_ldp,
    refine_resource_space,
    reports_to_csv,
    tangent_cut,
    truncated_hausdorff_cones,
    verify_recession_orthant,
)
from polyco.errors import EmptyPolyhedron, NotMonotone, OracleInconsistent
from polyco.ldp import Ldp, query_polyhedron
from polyco.polyhedron import Coord, Cone, Polyhedron


def test_tangent_of_affine_is_itself():
    g = ConvexConstraint(lambda x: 2 * x[0] + 3 * x[1] - 6, lambda x: np.array([2.0, 3.0]), ("a", "b"))
    for anchor in ([0.0, 0.0], [5.0, -1.0]):
        cut = tangent_cut(g, anchor)
        assert cut.coeffs == pytest.approx([-2.0, -3.0])
        assert cut.rhs == pytest.approx(-6.0)


def test_rover_phi_cut_at_zero():
    p = rover.RoverParams()
    assert p.a / p.beta == pytest.approx(1774.79, abs=5e-3)
    cut = tangent_cut(rover.phi_constraint(p), [0.0, float(rover.phi(0.0))])
    # -phi'(0) m_b + c >= phi(0), i.e. c >= phi(0) + phi'(0) m_b
    assert cut.coeffs == pytest.approx([-float(rover.phi_prime(0.0)), 1.0])
    assert cut.rhs == pytest.approx(float(rover.phi(0.0)))


def test_cuts_contain_sampled_feasible_points(rng):
    con = rover.phi_constraint()
    cuts = [tangent_cut(con, [a, float(rover.phi(a))]) for a in np.linspace(0, 100, 25)]
    mb = rng.uniform(0, 60, 1000)
    c = np.maximum(rover.phi(mb), 0) + rng.exponential(50.0, 1000)
    X = np.c_[mb, c]
    assert all(con(x) <= 1e-9 for x in X)
    for cut in cuts:
        assert np.all(X @ cut.coeffs >= cut.rhs - 1e-9 * (1 + abs(cut.rhs)))


@pytest.mark.parametrize("N,rows", [(2, 11), (5, 14), (200, 209)])
def test_outer_ldp_row_counts(N, rows):
    assert rover.surrogate(N).nrows == rows


def test_outer_ldp_no_anchors_returns_base():
    base = rover.build_rover()["linear"]
    assert outer_ldp([rover.phi_constraint()], [[]], base) is base
    assert rover.surrogate(0).nrows == 9


def test_outer_ldp_sign_violation():
    base = Ldp(["f"], ["r"], np.zeros((0, 1)), np.zeros((0, 1)), [])
    # g = r - 1 <= 0 gives the cut -r >= -1, negative on a resource
    g = ConvexConstraint(lambda x: x[0] - 1.0, lambda x: np.array([1.0]), ("r",))
    with pytest.raises(NotMonotone):
        outer_ldp([g], [[[0.0]]], base)


def test_surrogate_contains_true_set(rng):
    pts = rng.uniform([0, 770], [2000, 830], size=(3000, 2))
    ok = rover.feasible(pts)
    for N in (2, 20):
        P = query_polyhedron(rover.surrogate(N), (0.1, 0.05))
        assert np.all(P.contains_many(pts[ok], tol=1e-9))


def test_excess_trivial():
    C = np.array([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
    assert excess([[0.5, 0.5]], C) == 0.0
    assert excess(C, C, "polyline") == 0.0
    assert excess([[0.25, 0.75]], C[[0, 2]], "polyline") == pytest.approx(0.0, abs=1e-15)
    assert excess([[1.0, 1.0]], C) == pytest.approx(np.sqrt(0.5))
    # directional
    assert excess(C[:1], C) == 0.0 and excess(C, C[:1]) > 0


def test_excess_gripper_self():
    V = np.array([[5355.7, 2.99], [5472.4, 2.74], [6478.1, 0.91]])
    lo, span = normalizer(V)
    assert excess((V - lo) / span, (V - lo) / span, "polyline") == 0.0


def test_excess_to_polyhedron():
    P = Polyhedron(["x", "y"], [[1.0, 1.0]], [1.0])
    assert excess([[2.0, 2.0]], P) == 0.0
    assert excess([[0.0, 0.0]], P) == pytest.approx(0.5)


def test_hausdorff_identical_and_rotated():
    K = Cone(["x", "y"], np.zeros((0, 2)))
    assert truncated_hausdorff_cones(K, K) == 0.0
    # orthant rotated by 90 degrees: {x <= 0, y >= 0}
    R = Cone([Coord("x", nonneg=False), "y"], [[-1.0, 0.0]])
    d = truncated_hausdorff_cones(K, R)
    # the point (1, 0) is at distance 1 from the rotated quadrant
    assert d == pytest.approx(1.0, abs=1e-3)


def test_hausdorff_query_cone_is_orthant():
    L = rover.surrogate(10)
    P = query_polyhedron(L, (0.1, 0.05))
    K = Cone(P.coords, P.M)
    orth = Cone(P.coords, np.zeros((0, 2)))
    assert truncated_hausdorff_cones(K, orth) == pytest.approx(0.0, abs=1e-12)


def test_inflate():
    assert inflate([1.0, 2.0], 0.0).tolist() == [1.0, 2.0]
    assert inflate([1.0, 1.0], 0.5).tolist() == [1.5, 1.5]
    with pytest.raises(ValueError):
        inflate([0.0], -1.0)


def test_verify_recession_orthant():
    assert verify_recession_orthant(Polyhedron(["a", "b"], [[1.0, 1.0]], [1.0]))
    assert not verify_recession_orthant(Polyhedron(["a", "b"], [[1.0, -1.0]], [0.0]))
    free = Polyhedron([Coord("a", nonneg=False), "b"], [[1.0, 0.0]], [0.0])
    assert verify_recession_orthant(free)
    line = Polyhedron([Coord("a", nonneg=False), "b"], [[0.0, 1.0]], [0.0])
    assert not verify_recession_orthant(line)
    with pytest.raises(EmptyPolyhedron):
        verify_recession_orthant(Polyhedron(["a"], [[-1.0]], [1.0]))


@pytest.mark.parametrize("N", rover.TABLE_N)
def test_rover_query_recession(N):
    assert verify_recession_orthant(query_polyhedron(rover.surrogate(N), (0.1, 0.05)))


def test_refine_polyhedral_fixpoint():
    P = Polyhedron(["x", "y"], [[1.0, 1.0]], [1.0])
    con = ConvexConstraint(lambda x: 1.0 - x[0] - x[1], lambda x: np.array([-1.0, -1.0]), ("x", "y"))
    seq = refine_resource_space(P, lambda z: bool(z[0] + z[1] >= 1.0 - 1e-12), 10, [con])
    assert len(seq) == 1


def test_refine_oracle_inconsistent():
    P = Polyhedron(["x", "y"], [[1.0, 1.0]], [1.0])
    con = ConvexConstraint(lambda x: 1.0 - x[0] - x[1], lambda x: np.array([-1.0, -1.0]), ("x", "y"))
    # accepts nothing at the vertices, then accepts a point that the set excludes
    calls = {"n": 0}

    def oracle(z):
        calls["n"] += 1
        return bool(z[0] + z[1] >= 3.0) or bool(z[0] < -0.5)

    with pytest.raises(OracleInconsistent):
        refine_resource_space(P, oracle, 5, [con], t_max=-0.75)


def test_refine_rover_monotone():
    ref = rover.reference(grid=(800, 1600))
    lo, span = normalizer(ref)
    init = Polyhedron(["c_sys", "m_sys"], [[0.0, 1.0]], [rover.RoverParams().mass_floor])
    seq = refine_resource_space(init, rover.feasible, 60, [rover.resource_constraint()])
    assert len(seq) > 2
    from polyco.molp import MolpProblem, solve_molp

    errs, prev = [], None
    for P in seq:
        V = solve_molp(MolpProblem(np.eye(2), P)).vertices
        errs.append(excess((V - lo) / span, (ref - lo) / span, "polyline"))
        if prev is not None:
            # nested: earlier iterate contains the later one
            X = np.random.default_rng(0).uniform([0, 770], [2000, 830], (500, 2))
            assert np.all(prev.contains_many(X[P.contains_many(X)]))
        prev = P
    assert all(b <= a + 2e-3 for a, b in zip(errs, errs[1:]))
    assert errs[-1] < errs[0]


def test_report_csv():
    r = ApproxReport(epsilon=1e-4, delta=0.0, excess_PC=1e-4, excess_CP=5e-3, hv_gap_rel=1e-3,
                     max_gap=0.1, mean_gap=0.05, n_ineq=209, points=106, seconds=0.01, label="N=200")
    lines = reports_to_csv([r]).strip().splitlines()
    assert lines[0] == "label,n_ineq,points,e_PC,e_CP,dHV_rel,max_gap,mean_gap,time_s"
    cells = lines[1].split(",")
    assert cells[:3] == ["N=200", "209", "106"]
    assert float(cells[3]) == pytest.approx(1e-4)


def _sector_cone(a, b):
    # {d : d x (cos a, sin a) >= 0 ... } as the two inward normals of the sector edges
    na = np.array([-np.sin(a), np.cos(a)])
    nb = np.array([np.sin(b), -np.cos(b)])
    return Cone([Coord("x", nonneg=False), Coord("y", nonneg=False)], np.vstack([na, nb]))


@pytest.mark.parametrize("seed", range(4))
def test_hausdorff_matches_sampling_oracle(seed):
    from oracles import sector_hausdorff

    rng = np.random.default_rng(seed)
    a1, a2 = rng.uniform(0, np.pi, 2)
    b1, b2 = a1 + rng.uniform(0.2, 2.5), a2 + rng.uniform(0.2, 2.5)
    got = truncated_hausdorff_cones(_sector_cone(a1, b1), _sector_cone(a2, b2))
    assert got == pytest.approx(sector_hausdorff(a1, b1, a2, b2), abs=8e-3)
