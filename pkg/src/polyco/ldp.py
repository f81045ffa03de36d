"""Linear design problems: monotone polyhedral functionality/resource relations.

An :class:`Ldp` is the set of ``(f, r) >= 0`` with ``A_F f + A_R r >= b``.
Optionally it carries internal coordinates ``u >= 0`` that are existentially
quantified, ``A_F f + A_R r + A_I u >= b`` for some ``u``.  Internal
coordinates appear when a composite is kept in lifted (hybrid) form and in
models whose design variables are not ports.
"""
from dataclasses import dataclass
import json

import numpy as np

from .errors import DimensionMismatch, EmptyFeasible, EmptyPolyhedron, NotMonotone, NumericInstability
from .lp import LpStatus, solve_lp_arrays
from .molp import MolpProblem, UpperImage, solve_molp
from .polyhedron import Coord, Polyhedron, dumps, irredundant_rows


@dataclass(frozen=True)
class Port:
    name: str
    unit: str = ""


def _as_port(p):
    if isinstance(p, Port):
        return p
    if isinstance(p, str):
        return Port(p)
    if isinstance(p, dict):
        return Port(str(p["name"]), str(p.get("unit", "")))
    return Port(*p)


def _mat(a, rows, cols, what):
    a = np.asarray(a if a is not None else np.zeros((rows, cols)), dtype=float)
    if a.size == 0:
        a = np.zeros((rows, cols))
    a = a.reshape(-1, cols) if cols else np.zeros((rows, 0))
    if a.shape != (rows, cols):
        raise DimensionMismatch(f"{what} has shape {a.shape}, expected {(rows, cols)}")
    a.setflags(write=False)
    return a


class Ldp:
    """A linear design problem.

    Parameters
    ----------
    fun_ports, res_ports : sequence of Port, str or dict
    A_F : array_like, shape (rows, n_F)
    A_R : array_like, shape (rows, n_R)
    b : array_like, shape (rows,)
    internal_ports : sequence, optional
        Existentially quantified nonnegative coordinates.
    A_I : array_like, shape (rows, n_I), optional
    check : bool
        Run :func:`check_monotone` and raise :class:`NotMonotone` on failure.
    """

    def __init__(self, fun_ports, res_ports, A_F, A_R, b, internal_ports=(), A_I=None, check=True):
        self.fun_ports = tuple(_as_port(p) for p in fun_ports)
        self.res_ports = tuple(_as_port(p) for p in res_ports)
        self.internal_ports = tuple(_as_port(p) for p in internal_ports)
        b = np.asarray(b, dtype=float).ravel()
        k = b.size
        self.A_F = _mat(A_F, k, len(self.fun_ports), "A_F")
        self.A_R = _mat(A_R, k, len(self.res_ports), "A_R")
        self.A_I = _mat(A_I, k, len(self.internal_ports), "A_I")
        b.setflags(write=False)
        self.b = b
        names = [p.name for p in self.fun_ports + self.res_ports + self.internal_ports]
        if len(set(names)) != len(names):
            raise DimensionMismatch(f"port names must be unique, got {names}")
        if check:
            require_monotone(self)

    # ------------------------------------------------------------------
    @property
    def n_F(self):
        return len(self.fun_ports)

    @property
    def n_R(self):
        return len(self.res_ports)

    @property
    def n_I(self):
        return len(self.internal_ports)

    @property
    def nrows(self):
        return self.b.size

    @property
    def nvars(self):
        return self.n_F + self.n_R + self.n_I

    @property
    def fun_names(self):
        return [p.name for p in self.fun_ports]

    @property
    def res_names(self):
        return [p.name for p in self.res_ports]

    def __repr__(self):
        return (f"Ldp(fun={self.fun_names}, res={self.res_names}, internal={self.n_I}, "
                f"rows={self.nrows})")

    def polyhedron(self, prefix=""):
        """Feasible set over ``fun + res + internal`` coordinates (all nonnegative)."""
        coords = [Coord(prefix + p.name, p.unit, True)
                  for p in self.fun_ports + self.res_ports + self.internal_ports]
        M = np.hstack([self.A_F, self.A_R, self.A_I])
        return Polyhedron(coords, M, self.b)

    @classmethod
    def from_polyhedron(cls, P, fun, res, internal=(), check=True):
        """Build from a polyhedron whose coordinate names are split into
        functionality, resource and internal groups."""
        iF = [P.index(n) for n in fun]
        iR = [P.index(n) for n in res]
        iI = [P.index(n) for n in internal]
        if sorted(iF + iR + iI) != list(range(P.dim)):
            raise DimensionMismatch("every coordinate must be assigned to exactly one port group")
        if not all(c.nonneg for c in P.coords):
            P = P.materialize_nonneg([c.name for c in P.coords if not c.nonneg])
        M = np.asarray(P.M)
        port = lambda i: Port(P.coords[i].name, P.coords[i].unit)
        return cls([port(i) for i in iF], [port(i) for i in iR], M[:, iF], M[:, iR], P.m,
                   internal_ports=[port(i) for i in iI], A_I=M[:, iI], check=check)

    # ------------------------------------------------------------------
    def to_dict(self):
        d = {
            "fun_ports": [{"name": p.name, "unit": p.unit} for p in self.fun_ports],
            "res_ports": [{"name": p.name, "unit": p.unit} for p in self.res_ports],
            "A_F": self.A_F.tolist(),
            "A_R": self.A_R.tolist(),
            "b": self.b.tolist(),
        }
        if self.n_I:
            d["internal_ports"] = [{"name": p.name, "unit": p.unit} for p in self.internal_ports]
            d["A_I"] = self.A_I.tolist()
        return d

    def to_json(self, indent=1):
        return dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d, check=True):
        return cls(d["fun_ports"], d["res_ports"], d.get("A_F"), d.get("A_R"), d["b"],
                   internal_ports=d.get("internal_ports", ()), A_I=d.get("A_I"), check=check)

    @classmethod
    def from_json(cls, text, check=True):
        return cls.from_dict(json.loads(text), check=check)


def new_ldp(fun_ports, res_ports, A_F, A_R, b):
    """Construct an :class:`Ldp`, rejecting non-monotone data.

    Raises
    ------
    NotMonotone
        With the offending row and column.
    DimensionMismatch
    """
    return Ldp(fun_ports, res_ports, A_F, A_R, b, check=True)


def _sign_violation(A_F, A_R, rows):
    for i in rows:
        bad = np.flatnonzero(A_F[i] > 0)
        if bad.size:
            return int(i), int(bad[0])
        bad = np.flatnonzero(A_R[i] < 0)
        if bad.size:
            return int(i), A_F.shape[1] + int(bad[0])
    return None


def _recession_violation(ldp, rows):
    """With internal coordinates the set is a projection; test each
    generator ``-e_f`` / ``+e_r`` of the required recession directions
    by an LP over the lifted recession cone."""
    M = np.hstack([ldp.A_F, ldp.A_R, ldp.A_I])[rows]
    nF, nR, nI = ldp.n_F, ldp.n_R, ldp.n_I
    # unknown: internal direction d_I >= 0 (flags on f, r are handled by the caller:
    # -e_f leaves the orthant; decreasing f is allowed only down to 0, so we
    # check the cone of the constraint rows itself)
    for col in range(nF + nR):
        d = np.zeros(nF + nR)
        d[col] = -1.0 if col < nF else 1.0
        base = M[:, : nF + nR] @ d
        if nI == 0:
            ok = np.all(base >= -1e-12)
        else:
            r = solve_lp_arrays(np.zeros(nI), M[:, nF + nR:], -base, np.ones(nI, dtype=bool))
            ok = r.status is LpStatus.OPTIMAL
        if not ok:
            return col
    return None


def check_monotone(ldp):
    """Certify the upper-set property of the feasible set.

    Without internal coordinates this is the sign test ``A_F <= 0``,
    ``A_R >= 0`` on the irredundant rows.  With internal coordinates the
    lifted recession cone must contain ``(-e_f, d_I)`` and ``(e_r, d_I)``
    for some ``d_I >= 0``.

    Raises
    ------
    EmptyPolyhedron
        If the feasible set is empty.
    """
    return _monotone_detail(ldp)[0]


def _monotone_detail(ldp):
    P = ldp.polyhedron()
    rows = np.arange(ldp.nrows)
    if ldp.n_I == 0 and _sign_violation(ldp.A_F, ldp.A_R, rows) is None:
        if P.is_empty():
            raise EmptyPolyhedron("LDP feasible set is empty")
        return True, None
    idx, _, _ = irredundant_rows(P)
    if ldp.n_I == 0:
        v = _sign_violation(ldp.A_F, ldp.A_R, idx)
        return v is None, v
    col = _recession_violation(ldp, idx)
    if col is None:
        return True, None
    return False, (None, col)


def require_monotone(ldp):
    try:
        ok, where = _monotone_detail(ldp)
    except EmptyPolyhedron:
        # the empty set is trivially an upper set
        return ldp
    if not ok:
        row, col = where
        names = ldp.fun_names + ldp.res_names
        raise NotMonotone(f"row {row} breaks monotonicity on port {names[col]!r}", row=row, column=col)
    return ldp


def _query_polyhedron(ldp, fixed, side):
    fixed = np.asarray(fixed, dtype=float).ravel()
    if side == "fun":
        if fixed.size != ldp.n_F:
            raise DimensionMismatch(f"expected {ldp.n_F} functionality values, got {fixed.size}")
        rhs = ldp.b - ldp.A_F @ fixed
        M = np.hstack([ldp.A_R, ldp.A_I])
        ports = ldp.res_ports + ldp.internal_ports
    else:
        if fixed.size != ldp.n_R:
            raise DimensionMismatch(f"expected {ldp.n_R} resource values, got {fixed.size}")
        rhs = ldp.b - ldp.A_R @ fixed
        M = np.hstack([ldp.A_F, ldp.A_I])
        ports = ldp.fun_ports + ldp.internal_ports
    if np.any(fixed < 0):
        raise ValueError("fixed port values must be nonnegative")
    coords = [Coord(p.name, p.unit, True) for p in ports]
    return Polyhedron(coords, M, rhs)


def query_min_resources(ldp, f_fixed, tol=None):
    """Pareto-minimal resources for a fixed functionality vector.

    Raises
    ------
    EmptyFeasible
        If no resource vector provides ``f_fixed``.
    """
    P = _query_polyhedron(ldp, f_fixed, "fun")
    C = np.zeros((ldp.n_R, P.dim))
    C[np.arange(ldp.n_R), np.arange(ldp.n_R)] = 1.0
    return solve_molp(MolpProblem(C, P, "min"), tol=tol)


def query_max_functionalities(ldp, r_fixed, tol=None):
    """Pareto-maximal functionalities for a fixed resource budget."""
    P = _query_polyhedron(ldp, r_fixed, "res")
    C = np.zeros((ldp.n_F, P.dim))
    C[np.arange(ldp.n_F), np.arange(ldp.n_F)] = 1.0
    return solve_molp(MolpProblem(C, P, "max"), tol=tol)


def query_polyhedron(ldp, f_fixed):
    """Feasible resource set (internal coordinates projected out) at ``f_fixed``."""
    from .polyhedron import project

    P = _query_polyhedron(ldp, f_fixed, "fun")
    if ldp.n_I:
        P = project(P, ldp.res_names)
    return P


def molp_as_ldp(A, b):
    """Wrap ``Min r s.t. A r >= b, r >= 0`` as an LDP with a single
    functionality port pinned at 0."""
    b = np.asarray(b, dtype=float).ravel()
    A = np.asarray(A, dtype=float)
    n = A.shape[1] if A.ndim == 2 else 0
    A = A.reshape(b.size, n) if b.size else np.zeros((0, n))
    res = [Port(f"r{i + 1}") for i in range(n)]
    return Ldp([Port("f0")], res, np.zeros((b.size, 1)), A, b, check=False)
