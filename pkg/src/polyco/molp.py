"""Exact multi-objective LP: the upper image ``cl(C X + R^q_+)``.

Two objectives use the dichotomic weighted-sum recursion between the two
lexicographic minima.  Three or more use Benson's outer approximation: the
outer polyhedron starts as the ideal-point orthant and is cut by supporting
hyperplanes until every one of its vertices lies in the upper image.
"""
from dataclasses import dataclass, field
import csv
import io
import json

import numpy as np

from ._config import MOLP_TOL
from .errors import EmptyFeasible, NumericInstability, UnboundedObjective
from .lp import LpStatus, lexmin_arrays, solve_lp_arrays
from .polyhedron import Coord, Polyhedron, dumps


@dataclass(frozen=True)
class MolpProblem:
    """``Min C x`` over ``x in P`` with a per-objective sense.

    ``sense`` may be a single string or one of ``"min"``/``"max"`` per row
    of ``C``; maximized rows are negated internally.
    """

    C: np.ndarray
    P: Polyhedron
    sense: tuple = ("min",)

    def __post_init__(self):
        C = np.atleast_2d(np.asarray(self.C, dtype=float))
        if C.shape[1] != self.P.dim:
            raise ValueError(f"C has {C.shape[1]} columns, polyhedron has {self.P.dim} coordinates")
        sense = self.sense
        if isinstance(sense, str):
            sense = (sense,) * C.shape[0]
        sense = tuple(sense)
        if len(sense) == 1 and C.shape[0] > 1:
            sense = sense * C.shape[0]
        if len(sense) != C.shape[0] or any(s not in ("min", "max") for s in sense):
            raise ValueError("sense must give 'min' or 'max' for every objective")
        C.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "sense", sense)

    @property
    def q(self):
        return self.C.shape[0]

    def signs(self):
        return np.array([1.0 if s == "min" else -1.0 for s in self.sense])


@dataclass(frozen=True)
class UpperImage:
    """Vertices and rays of an MOLP outcome set.

    For minimization the set is ``conv(vertices) + cone(rays)``; with
    maximized objectives the corresponding coordinates are reported in
    their original sign and the rays point downward along them.

    Attributes
    ----------
    vertices : ndarray, shape (k, q)
        Extreme points, sorted lexicographically.
    rays : ndarray, shape (r, q)
    tol : float
    preimages : ndarray or None
        One decision vector per vertex when available.
    """

    vertices: np.ndarray
    rays: np.ndarray
    tol: float = MOLP_TOL
    preimages: np.ndarray = field(default=None, compare=False, repr=False)

    @property
    def q(self):
        return self.vertices.shape[1] if self.vertices.ndim == 2 else 0

    def to_dict(self):
        return {"vertices": np.asarray(self.vertices).tolist(),
                "rays": np.asarray(self.rays).tolist(), "tol": float(self.tol)}

    def to_json(self, indent=1):
        return dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d):
        V = np.array(d["vertices"], dtype=float)
        q = V.shape[1] if V.ndim == 2 else len(d["rays"][0]) if d["rays"] else 0
        R = np.array(d["rays"], dtype=float).reshape(-1, q)
        return cls(V.reshape(-1, q), R, float(d.get("tol", MOLP_TOL)))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_csv(self, header=None):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header is not None:
            w.writerow(header)
        for v in self.vertices:
            w.writerow([format(float(x), ".17g") for x in v])
        return buf.getvalue()


def dominance_filter(points, tol=0.0):
    """Componentwise-nondominated subset of ``points`` in input order.

    A point is dropped if another point is ``<=`` in every coordinate (up to
    ``tol``) and strictly smaller in at least one; among exact duplicates the
    first occurrence is kept.
    """
    P = np.asarray(points, dtype=float)
    if P.size == 0:
        return P.reshape(0, P.shape[1] if P.ndim == 2 else 0)
    P = np.atleast_2d(P)
    n = P.shape[0]
    keep = np.ones(n, dtype=bool)
    chunk = max(1, 4_000_000 // max(n, 1))
    for s in range(0, n, chunk):
        blk = P[s:s + chunk]
        le = np.all(P[None, :, :] <= blk[:, None, :] + tol, axis=2)
        lt = np.any(P[None, :, :] < blk[:, None, :] - tol, axis=2)
        dominated = np.any(le & lt, axis=1)
        keep[s:s + chunk] &= ~dominated
    # duplicates: keep the first one
    idx = np.flatnonzero(keep)
    if idx.size > 1:
        _, first = np.unique(P[idx], axis=0, return_index=True)
        mask = np.zeros(idx.size, dtype=bool)
        mask[first] = True
        keep[idx[~mask]] = False
    return P[keep]


def _dominance_oracle(points):
    """Plain double loop version of :func:`dominance_filter` (for testing)."""
    out = []
    pts = [tuple(map(float, p)) for p in points]
    for i, p in enumerate(pts):
        dom = False
        for j, r in enumerate(pts):
            if j == i:
                continue
            if all(a <= b for a, b in zip(r, p)) and any(a < b for a, b in zip(r, p)):
                dom = True
                break
            if r == p and j < i:
                dom = True
                break
        if not dom:
            out.append(p)
    return np.array(out).reshape(-1, len(pts[0]) if pts else 0)


# ---------------------------------------------------------------------------


def _check_bounded(C, P, tol):
    """Ideal point and one argmin per objective; raises on empty/unbounded."""
    M, m, nn = np.asarray(P.M), np.asarray(P.m), P.nonneg
    ideal = np.empty(C.shape[0])
    for i, c in enumerate(C):
        r = solve_lp_arrays(c, M, m, nn)
        if r.status is LpStatus.INFEASIBLE:
            raise EmptyFeasible("MOLP feasible set is empty")
        if r.status is LpStatus.UNBOUNDED:
            raise UnboundedObjective(f"objective {i} is unbounded below", ray=r.ray, objective=i)
        if r.status is LpStatus.NUMERIC:
            raise NumericInstability(f"LP for objective {i} failed")
        ideal[i] = r.value
    return ideal


def _lex(objs, P):
    r = lexmin_arrays(objs, P.M, P.m, P.nonneg)
    if r.status is LpStatus.NUMERIC:
        raise NumericInstability("lexicographic LP failed")
    if not r.optimal:
        raise NumericInstability(f"lexicographic LP returned {r.status.value}")
    return r.x


def _dichotomy(C, P, tol):
    xa = _lex([C[0], C[1]], P)
    xb = _lex([C[1], C[0]], P)
    ya, yb = C @ xa, C @ xb
    scale = 1.0 + np.abs(np.vstack([ya, yb])).max(axis=0)
    pts = [(ya, xa)]
    if np.any(np.abs(ya - yb) > tol * scale):
        stack_ = [((ya, xa), (yb, xb))]
        found = []
        while stack_:
            (y1, x1), (y2, x2) = stack_.pop()
            # weights normal to the segment y1 -> y2
            w = np.array([y1[1] - y2[1], y2[0] - y1[0]])
            if np.any(w <= 0):
                continue
            ws = w / np.abs(w).sum()
            r = solve_lp_arrays(ws @ C, P.M, P.m, P.nonneg)
            if not r.optimal:
                raise NumericInstability("weighted-sum LP failed")
            ref = float(ws @ y1)
            if r.value >= ref - tol * (1.0 + abs(ref)):
                continue
            x = _lex([ws @ C, C[0]], P)
            y = C @ x
            if (np.all(np.abs(y - y1) <= tol * scale) or np.all(np.abs(y - y2) <= tol * scale)):
                continue
            found.append((y, x))
            stack_.append(((y1, x1), (y, x)))
            stack_.append(((y, x), (y2, x2)))
        pts.extend(found)
        pts.append((yb, xb))
    pts.sort(key=lambda t: (t[0][0], t[0][1]))
    # drop points that are collinear or dominated within tolerance
    out = []
    for y, x in pts:
        if out and np.all(y >= out[-1][0] - tol * scale):
            continue
        out.append((y, x))
    return out


def _benson(C, P, ideal, tol, max_iter=500):
    from .vertex import enumerate_vertices

    q = C.shape[0]
    names = [Coord(f"y{i}", nonneg=False) for i in range(q)]
    cut_M = [np.eye(q)]
    cut_m = [ideal.copy()]
    scale = 1.0 + np.abs(ideal).max()
    M, m, nn = np.asarray(P.M), np.asarray(P.m), P.nonneg
    n = P.dim
    # P2(v): min z  s.t.  x in P,  -C x + z 1 >= -v,  z free
    M2 = np.zeros((M.shape[0] + q, n + 1))
    M2[: M.shape[0], :n] = M
    M2[M.shape[0]:, :n] = -C
    M2[M.shape[0]:, n] = 1.0
    nn2 = np.r_[nn, False]
    cz = np.r_[np.zeros(n), 1.0]
    verified = {}
    for _ in range(max_iter):
        outer = Polyhedron(names, np.vstack(cut_M), np.concatenate(cut_m))
        V = enumerate_vertices(outer, cap=max(8, q)).vertices
        cut_added = False
        for v in V:
            key = tuple(np.round(v / scale, 9))
            if key in verified:
                continue
            r = solve_lp_arrays(cz, M2, np.r_[m, -v], nn2)
            if not r.optimal:
                raise NumericInstability("Benson distance LP failed")
            z = r.value
            if z <= tol * scale:
                verified[key] = (v, r.x[:n])
                continue
            w = r.duals[M.shape[0]:]
            w = np.maximum(w, 0.0)
            if w.sum() <= 0:
                raise NumericInstability("Benson cut has zero weight")
            w = w / w.sum()
            rw = solve_lp_arrays(w @ C, M, m, nn)
            if not rw.optimal:
                raise NumericInstability("Benson support LP failed")
            cut_M.append(w[None, :])
            cut_m.append(np.array([rw.value]))
            cut_added = True
            break
        if not cut_added:
            break
    else:
        raise NumericInstability("Benson iteration limit reached")
    outer = Polyhedron(names, np.vstack(cut_M), np.concatenate(cut_m))
    V = enumerate_vertices(outer, cap=max(8, q)).vertices
    out = []
    for v in V:
        key = tuple(np.round(v / scale, 9))
        if key in verified:
            out.append(verified[key])
        else:
            r = solve_lp_arrays(cz, M2, np.r_[m, -v], nn2)
            out.append((v, r.x[:n] if r.optimal else None))
    # rounded keys keep the order stable under roundoff ties
    out.sort(key=lambda t: tuple(np.round(t[0] / scale, 9)))
    return out


def solve_molp(prob, tol=None):
    """Vertices and rays of the upper image of ``prob``.

    Raises
    ------
    EmptyFeasible
        If the feasible set is empty.
    UnboundedObjective
        If some objective is unbounded below on the feasible set.
    """
    tol = MOLP_TOL if tol is None else float(tol)
    signs = prob.signs()
    C = prob.C * signs[:, None]
    P = prob.P
    q = C.shape[0]
    ideal = _check_bounded(C, P, tol)
    if q == 1:
        r = solve_lp_arrays(C[0], P.M, P.m, P.nonneg)
        pts = [(np.array([r.value]), r.x)]
    elif q == 2:
        pts = _dichotomy(C, P, tol)
    else:
        pts = _benson(C, P, ideal, tol)
    V = np.array([y for y, _ in pts]) * signs[None, :]
    X = np.array([x for _, x in pts])
    R = np.eye(q) * signs[:, None]
    return UpperImage(V, R, tol, preimages=X)
