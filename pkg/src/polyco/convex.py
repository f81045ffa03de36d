"""Polyhedral outer approximation of convex design problems.

Convex constraints ``g(x) <= 0`` are replaced by supporting halfspaces
(tangent cuts).  Because every cut contains the true set, the resulting LDP
is an outer approximation, and a frontier point ``p`` of the surrogate that
sits within ``eps`` (sup-norm) of the true upper set can be made feasible by
the inflation ``p + eps * 1``.
"""
from dataclasses import asdict, dataclass
import csv
import io
from typing import Callable, Sequence

import numpy as np

from ._config import get_tol
from .errors import EmptyPolyhedron, NotMonotone, OracleInconsistent
from .ldp import Ldp
from .lp import LpStatus, solve_lp_arrays
from .polyhedron import Cone, Polyhedron


@dataclass(frozen=True)
class ConvexConstraint:
    """``g(x) <= 0`` over the named coordinates ``coords``.

    ``eval`` returns ``g(x)`` and ``grad`` a subgradient at ``x``.
    """

    eval: Callable
    grad: Callable
    coords: tuple

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class LinearRow:
    """``coeffs . x >= rhs`` over ``coords``."""

    coords: tuple
    coeffs: np.ndarray
    rhs: float

    def holds(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        return float(self.coeffs @ x) >= self.rhs - tol * (1.0 + abs(self.rhs))


def tangent_cut(c, anchor):
    """Supporting halfspace ``g(a) + grad(a).(x - a) <= 0`` at ``anchor``,
    returned in ``>=`` form."""
    a = np.asarray(anchor, dtype=float)
    g = float(c.eval(a))
    s = np.asarray(c.grad(a), dtype=float)
    return LinearRow(tuple(c.coords), -s, g - float(s @ a))


def outer_ldp(constraints, anchors, base):
    """Append one tangent cut per anchor (per constraint) to ``base``.

    Constraint coordinates are matched by name against the base LDP's
    functionality, resource and internal ports.

    Raises
    ------
    NotMonotone
        If a cut puts a positive coefficient on a functionality port or a
        negative one on a resource port.
    """
    names = base.fun_names + base.res_names + [p.name for p in base.internal_ports]
    col = {n: i for i, n in enumerate(names)}
    nF, nR = base.n_F, base.n_R
    rows, rhs = [], []
    for con, pts in zip(constraints, anchors):
        for a in pts:
            cut = tangent_cut(con, np.atleast_1d(a))
            row = np.zeros(len(names))
            for label, v in zip(cut.coords, cut.coeffs):
                row[col[label]] += v
            if np.any(row[:nF] > 0) or np.any(row[nF:nF + nR] < 0):
                bad = int(np.flatnonzero(np.r_[row[:nF] > 0, row[nF:nF + nR] < 0])[0])
                raise NotMonotone(f"tangent cut at anchor {a!r} breaks monotonicity",
                                  row=base.nrows + len(rows), column=bad)
            rows.append(row)
            rhs.append(cut.rhs)
    if not rows:
        return base
    R = np.array(rows)
    return Ldp(base.fun_ports, base.res_ports,
               np.vstack([base.A_F, R[:, :nF]]), np.vstack([base.A_R, R[:, nF:nF + nR]]),
               np.concatenate([base.b, rhs]), internal_ports=base.internal_ports,
               A_I=np.vstack([base.A_I, R[:, nF + nR:]]), check=False)


# ---------------------------------------------------------------------------
# distances


def normalizer(reference):
    """Affine map to the ideal-nadir box of ``reference``: ``(x - lo) / span``."""
    R = np.atleast_2d(np.asarray(reference, dtype=float))
    lo = R.min(axis=0)
    span = R.max(axis=0) - lo
    span[span <= 0] = 1.0
    return lo, span


def _nn_dist(A, B, chunk=2048):
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    out = np.empty(A.shape[0])
    for s in range(0, A.shape[0], chunk):
        d = A[s:s + chunk, None, :] - B[None, :, :]
        out[s:s + chunk] = np.sqrt((d * d).sum(axis=2)).min(axis=1)
    return out


def _polyline_dist(A, B):
    """Distance from each row of ``A`` to the polyline through the rows of ``B``."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    if B.shape[0] == 1:
        return _nn_dist(A, B)
    P0, P1 = B[:-1], B[1:]
    D = P1 - P0
    L2 = (D * D).sum(axis=1)
    L2[L2 == 0] = 1.0
    out = np.empty(A.shape[0])
    chunk = max(1, 2_000_000 // max(1, P0.shape[0]))
    for s in range(0, A.shape[0], chunk):
        X = A[s:s + chunk, None, :]
        t = np.clip(((X - P0[None]) * D[None]).sum(axis=2) / L2[None], 0.0, 1.0)
        Q = P0[None] + t[..., None] * D[None]
        d = X - Q
        out[s:s + chunk] = np.sqrt((d * d).sum(axis=2)).min(axis=1)
    return out


def excess(A, B, mode="points"):
    """One-sided excess ``sup_{a in A} dist(a, B)``.

    Parameters
    ----------
    A : (n, d) array
        Finite point set (vertices or a dense boundary sample).
    B : (k, d) array or Polyhedron
        Point set (nearest neighbour, ``mode="points"``), a polyline through
        its rows in the given order (``mode="polyline"``), or a polyhedron
        (Euclidean distance is replaced by the exact sup-norm distance, via
        one LP per point).
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return 0.0
    if isinstance(B, Polyhedron):
        return float(max(_linf_dist_to_poly(a, B) for a in A))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if mode == "polyline":
        return float(_polyline_dist(A, B).max())
    return float(_nn_dist(A, B).max())


def _linf_dist_to_poly(a, P):
    n = P.dim
    # min t s.t. x in P, -t <= x - a <= t
    I = np.eye(n)
    M = np.vstack([np.hstack([P.M, np.zeros((P.nrows, 1))]),
                   np.hstack([I, np.ones((n, 1))]),
                   np.hstack([-I, np.ones((n, 1))])])
    m = np.concatenate([P.m, a, -a])
    nn = np.r_[P.nonneg, True]
    r = solve_lp_arrays(np.r_[np.zeros(n), 1.0], M, m, nn)
    if r.status is LpStatus.INFEASIBLE:
        raise EmptyPolyhedron("distance to an empty polyhedron")
    return max(0.0, r.value)


def _cone_generators(K):
    """Unit generators of ``K`` (lines appear as opposite ray pairs)."""
    from .vertex import enumerate_vertices

    R = enumerate_vertices(K.as_polyhedron(), cap=max(8, K.dim)).rays
    R = R[np.linalg.norm(R, axis=1) > 0] if R.size else np.zeros((0, K.dim))
    return R / np.linalg.norm(R, axis=1, keepdims=True) if R.size else R


def _unit_directions(K, G, n_dir, rng):
    d = K.dim
    if d == 2:
        th = np.linspace(0.0, 2 * np.pi, n_dir, endpoint=False)
        U = np.c_[np.cos(th), np.sin(th)]
    else:
        U = rng.normal(size=(n_dir, d))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
    U = U[K.as_polyhedron().contains_many(U, tol=1e-12)]
    return np.vstack([U, G]) if G.size else U


def _dist_to_cone(U, G):
    """Euclidean distance from each row of ``U`` to ``cone(G)`` by NNLS."""
    from scipy.optimize import nnls

    if G.size == 0:
        return np.linalg.norm(U, axis=1)
    return np.array([nnls(G.T, u)[1] for u in U])


def truncated_hausdorff_cones(K1, K2, n_dir=2048, seed=0):
    """Hausdorff distance between ``K1 & B_1(0)`` and ``K2 & B_1(0)``.

    For ``|x| <= 1`` the projection onto a closed convex cone is no longer
    than ``x``, so the distance to the truncation equals the distance to the
    cone itself; by homogeneity the supremum sits on the unit sphere.  The
    sphere part of each cone is sampled (``n_dir`` directions plus the
    generators) and every distance is an exact cone projection.
    """
    rng = np.random.default_rng(seed)
    G1, G2 = _cone_generators(K1), _cone_generators(K2)
    U1 = _unit_directions(K1, G1, n_dir, rng)
    U2 = _unit_directions(K2, G2, n_dir, rng)
    d12 = _dist_to_cone(U1, G2).max(initial=0.0) if len(U1) else 0.0
    d21 = _dist_to_cone(U2, G1).max(initial=0.0) if len(U2) else 0.0
    return float(max(d12, d21))


def inflate(p, epsilon):
    """``p + epsilon * 1``."""
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    return np.asarray(p, dtype=float) + float(epsilon)


def verify_recession_orthant(P, tol=None):
    """True iff the recession cone of ``P`` is exactly the nonnegative orthant.

    Checks ``M e_j >= 0`` for every basis direction (orthant inside the cone)
    and, by one LP per coordinate, that no recession direction has a
    negative entry (cone inside the orthant).

    Raises
    ------
    EmptyPolyhedron
    """
    tol = get_tol(tol)
    if P.is_empty(tol):
        raise EmptyPolyhedron("recession test on an empty polyhedron")
    M = np.asarray(P.M)
    if M.shape[0] and np.any(M < -tol):
        return False
    nn = P.nonneg
    n = P.dim
    for j in range(n):
        if nn[j]:
            continue
        # min d_j over {M d >= 0, flagged d >= 0, d >= -1}
        Mb = np.vstack([M, np.eye(n)])
        mb = np.concatenate([np.zeros(M.shape[0]), -np.ones(n)])
        c = np.zeros(n)
        c[j] = 1.0
        r = solve_lp_arrays(c, Mb, mb, nn)
        if r.status is not LpStatus.OPTIMAL or r.value < -tol:
            return False
    return True


# ---------------------------------------------------------------------------
# resource-space refinement


def refine_resource_space(init, feasible, budget, constraints, tol=1e-6, bisect_iters=60,
                          t_max=None, callback=None):
    """Outer approximations of a convex upper set by cutting at infeasible
    Pareto vertices.

    Parameters
    ----------
    init : Polyhedron
        Outer approximation to start from (caller-certified).
    feasible : callable
        Membership oracle on resource vectors (vectorized over rows is not
        required).
    budget : int
        Maximum number of cuts.
    constraints : sequence of ConvexConstraint
        Convex description of the true set; the cut at a boundary point is
        the tangent of the constraint with the largest value there.
    tol : float
        A vertex counts as feasible when ``vertex + tol * 1`` passes the oracle.

    Returns
    -------
    list of Polyhedron
        ``init`` followed by every refined iterate.
    """
    from .molp import MolpProblem, solve_molp

    q = init.dim
    P = init
    seq = [P]
    cuts = 0
    while cuts < budget:
        ui = solve_molp(MolpProblem(np.eye(q), P, "min"))
        bad = [v for v in ui.vertices if not feasible(v + tol)]
        if callback is not None:
            callback(P, ui)
        if not bad:
            break
        new_rows, new_rhs = [], []
        for v in bad:
            if cuts + len(new_rows) >= budget:
                break
            # bisection along v + t 1 for the first feasible point
            hi = t_max if t_max is not None else 1.0
            while not feasible(v + hi):
                hi *= 2.0
                if hi > 1e12:
                    raise OracleInconsistent("no feasible point along the inflation ray")
            lo = 0.0
            for _ in range(bisect_iters):
                mid = 0.5 * (lo + hi)
                if feasible(v + mid):
                    hi = mid
                else:
                    lo = mid
            x = v + hi
            if not P.contains(x, tol=1e-9):
                raise OracleInconsistent("oracle accepted a point outside the current outer set")
            vals = [float(c.eval(x)) for c in constraints]
            c = constraints[int(np.argmax(vals))]
            cut = tangent_cut(c, x)
            new_rows.append(cut.coeffs)
            new_rhs.append(cut.rhs)
        cuts += len(new_rows)
        P = Polyhedron(P.coords, np.vstack([P.M, new_rows]), np.concatenate([P.m, new_rhs]))
        seq.append(P)
    return seq


# ---------------------------------------------------------------------------


@dataclass
class ApproxReport:
    """Accuracy of one computed frontier against a reference.

    ``epsilon`` is the (normalized) vertex excess ``e[P, C]`` and ``delta``
    the recession-cone error, zero whenever the orthant check passes.
    """

    epsilon: float
    delta: float
    excess_PC: float
    excess_CP: float
    igd: float = float("nan")
    hv_gap_rel: float = float("nan")
    max_gap: float = float("nan")
    mean_gap: float = float("nan")
    n_ineq: int = 0
    points: int = 0
    seconds: float = float("nan")
    label: str = ""
    epsilon_abs: float = float("nan")

    CSV_FIELDS = ("label", "n_ineq", "points", "excess_PC", "excess_CP", "hv_gap_rel",
                  "max_gap", "mean_gap", "seconds")

    def row(self):
        d = asdict(self)
        return [d[k] if isinstance(d[k], str) else (int(d[k]) if k in ("n_ineq", "points") else
                                                    format(float(d[k]), ".6e"))
                for k in self.CSV_FIELDS]


def reports_to_csv(reports):
    """Table layout: n_ineq, points, e[P,C], e[C,P], dHV_rel, max gap, mean gap, time."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "n_ineq", "points", "e_PC", "e_CP", "dHV_rel", "max_gap", "mean_gap", "time_s"])
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()
