"""Dense two-phase simplex with duals, unbounded rays and lexicographic solves.

The pivoting loop lives in :mod:`polyco._backend` (compiled or numpy).  This
module builds the standard form, runs the two phases and then recomputes the
primal point, the multipliers and any unbounded ray directly from the final
basis so that the reported numbers do not carry tableau drift.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import _backend
from ._config import get_tol
from .errors import NumericInstability

_PIVOT_TOL = 1e-9
_BLAND_AFTER = 50


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    NUMERIC = "NumericInstability"


@dataclass(frozen=True)
class LpResult:
    """Outcome of a single LP solve.

    Attributes
    ----------
    status : LpStatus
    x : ndarray or None
        Optimal point (``Optimal`` only).
    value : float
        Objective value in the requested sense (``nan`` unless optimal).
    duals : ndarray or None
        One nonnegative multiplier per ``>=`` row.
    ray : ndarray or None
        Recession direction along which the objective improves without
        bound (``Unbounded`` only).
    values : tuple
        For :func:`lexmin`, the optimal value of every objective in turn.
    """

    status: LpStatus
    x: Optional[np.ndarray] = None
    value: float = float("nan")
    duals: Optional[np.ndarray] = None
    ray: Optional[np.ndarray] = None
    iterations: int = 0
    values: tuple = ()

    @property
    def optimal(self):
        return self.status is LpStatus.OPTIMAL


@dataclass
class _StdResult:
    status: int  # 0 optimal, 1 unbounded, 2 infeasible, 3 numeric
    x: Optional[np.ndarray] = None
    pi: Optional[np.ndarray] = None
    ray: Optional[np.ndarray] = None
    iterations: int = 0


def _pivot(T, basis, r, j):
    T[r] /= T[r, j]
    f = T[:, j].copy()
    f[r] = 0.0
    nz = np.flatnonzero(f)
    T[nz] -= f[nz, None] * T[r]
    T[nz, j] = 0.0
    T[r, j] = 1.0
    basis[r] = j


def _solve_standard(A, b, c, tol, max_iter=None):
    """min c.x s.t. A x = b, x >= 0 by the two-phase method."""
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = np.arange(n, n + m, dtype=np.intp)

    st, _, it1 = _backend.simplex_iterate(T, basis, n, max_iter, _PIVOT_TOL, _BLAND_AFTER)
    if st == 2:
        return _StdResult(3, iterations=it1)
    scale = 1.0 + (np.abs(b).max() if m else 0.0)
    if -T[m, -1] > tol * scale:
        return _StdResult(2, iterations=it1)

    # drive artificials out of the basis; rows that cannot be cleared are redundant
    keep = np.ones(m, dtype=bool)
    for r in range(m):
        if basis[r] < n:
            continue
        row = np.abs(T[r, :n])
        j = int(np.argmax(row)) if n else 0
        if n and row[j] > 1e-9:
            _pivot(T, basis, r, j)
        else:
            keep[r] = False
    rows = np.flatnonzero(keep)
    mk = rows.size

    T2 = np.empty((mk + 1, n + 1))
    T2[:mk, :n] = T[rows, :n]
    T2[:mk, -1] = T[rows, -1]
    basis2 = np.ascontiguousarray(basis[rows])
    cb = c[basis2]
    T2[mk, :n] = c - cb @ T2[:mk, :n]
    T2[mk, -1] = -(cb @ T2[:mk, -1])
    st, enter, it2 = _backend.simplex_iterate(T2, basis2, n, max_iter, _PIVOT_TOL, _BLAND_AFTER)
    iters = it1 + it2
    if st == 2:
        return _StdResult(3, iterations=iters)

    Ak, bk = A[rows], b[rows]
    B = Ak[:, basis2]
    try:
        xb = np.linalg.solve(B, bk) if mk else np.zeros(0)
        pik = np.linalg.solve(B.T, c[basis2]) if mk else np.zeros(0)
    except np.linalg.LinAlgError:
        return _StdResult(3, iterations=iters)
    pi = np.zeros(m)
    pi[rows] = pik
    pi[flip] *= -1.0

    if st == 1:
        d = np.zeros(n)
        d[enter] = 1.0
        if mk:
            d[basis2] = -np.linalg.solve(B, Ak[:, enter])
        d[np.abs(d) < 1e-14] = 0.0
        return _StdResult(1, ray=d, iterations=iters)

    x = np.zeros(n)
    x[basis2] = xb
    xs = 1.0 + np.abs(x).max(initial=0.0)
    if x.min(initial=0.0) < -1e-7 * xs or (mk and np.abs(Ak @ x - bk).max() > 1e-7 * scale * xs):
        # fall back to the tableau reading if refactorization disagrees
        x_t = np.zeros(n)
        x_t[basis2] = T2[:mk, -1]
        if x_t.min(initial=0.0) < -1e-7 * xs or (mk and np.abs(Ak @ x_t - bk).max() > 1e-6 * scale * xs):
            return _StdResult(3, iterations=iters)
        x = x_t
    x = np.maximum(x, 0.0)
    return _StdResult(0, x=x, pi=pi, iterations=iters)


def _solve_primal_route(c, M, m, nonneg, tol):
    k, n = M.shape
    free = np.flatnonzero(~nonneg)
    A = np.hstack([M, -M[:, free], -np.eye(k)])
    cc = np.concatenate([c, -c[free], np.zeros(k)])
    res = _solve_standard(A, m, cc, tol)
    if res.status == 0:
        x = res.x[:n].copy()
        x[free] -= res.x[n:n + free.size]
        return LpStatus.OPTIMAL, x, np.maximum(res.pi, 0.0), None, res.iterations
    if res.status == 1:
        d = res.ray[:n].copy()
        d[free] -= res.ray[n:n + free.size]
        return LpStatus.UNBOUNDED, None, None, d, res.iterations
    if res.status == 2:
        return LpStatus.INFEASIBLE, None, None, None, res.iterations
    return LpStatus.NUMERIC, None, None, None, res.iterations


def _solve_dual_route(c, M, m, nonneg, tol):
    """Solve the dual  max m.y  s.t.  M^T y (<= on flagged, = on free) c,  y >= 0."""
    k, n = M.shape
    nn = np.flatnonzero(nonneg)
    S = np.zeros((n, nn.size))
    S[nn, np.arange(nn.size)] = 1.0
    A = np.hstack([M.T, S])
    cc = np.concatenate([-m, np.zeros(nn.size)])
    res = _solve_standard(A, c, cc, tol)
    if res.status == 0:
        return LpStatus.OPTIMAL, -res.pi, res.x[:k], None, res.iterations
    if res.status == 1:
        return LpStatus.INFEASIBLE, None, None, None, res.iterations
    if res.status == 2:
        return None, None, None, None, res.iterations
    return LpStatus.NUMERIC, None, None, None, res.iterations


def solve_lp_arrays(c, M, m, nonneg, sense="min", tol=None):
    """Solve ``min/max c.x`` over ``{M x >= m, x_i >= 0 where nonneg[i]}``."""
    tol = get_tol(tol)
    c = np.asarray(c, dtype=float).ravel()
    M = np.asarray(M, dtype=float).reshape(-1, c.size)
    m = np.asarray(m, dtype=float).ravel()
    nonneg = np.asarray(nonneg, dtype=bool).ravel()
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    sign = 1.0 if sense == "min" else -1.0
    cs = sign * c

    rs = np.abs(M).max(axis=1, initial=0.0)
    zero = rs == 0.0
    if np.any(zero & (m > tol)):
        return LpResult(LpStatus.INFEASIBLE)
    live = ~zero
    rs_l = rs[live]
    Ms = M[live] / rs_l[:, None]
    ms = m[live] / rs_l
    cscale = np.abs(cs).max(initial=0.0)
    cn = cs / cscale if cscale > 0 else cs

    route = "dual" if Ms.shape[0] > c.size else "primal"
    it0 = 0
    if route == "dual":
        status, x, y, ray, it0 = _solve_dual_route(cn, Ms, ms, nonneg, tol)
        if status is None or status is LpStatus.NUMERIC:
            route = "primal"
        elif status is LpStatus.INFEASIBLE:
            return LpResult(status, iterations=it0)
    if route == "primal":
        status, x, y, ray, it = _solve_primal_route(cn, Ms, ms, nonneg, tol)
        it += it0
    else:
        it = it0

    if status is LpStatus.UNBOUNDED:
        nrm = np.abs(ray).max()
        return LpResult(status, ray=ray / nrm if nrm > 0 else ray, iterations=it)
    if status is not LpStatus.OPTIMAL:
        return LpResult(status, iterations=it)

    viol = ms - Ms @ x if ms.size else np.zeros(0)
    xscale = 1.0 + np.abs(x).max(initial=0.0)
    if (viol.size and viol.max() > 1e-6 * xscale) or (np.any(x[nonneg] < -1e-6 * xscale)):
        return LpResult(LpStatus.NUMERIC, iterations=it)
    x = x.copy()
    x[nonneg] = np.maximum(x[nonneg], 0.0)
    duals = np.zeros(M.shape[0])
    duals[live] = np.maximum(y, 0.0) * (cscale if cscale > 0 else 1.0) / rs_l
    value = float(c @ x)
    return LpResult(LpStatus.OPTIMAL, x=x, value=value, duals=duals, iterations=it)


def solve_lp(c, P, sense="min", tol=None):
    """Optimize a linear objective over a polyhedron.

    Parameters
    ----------
    c : array_like
        Objective, one entry per coordinate of ``P``.
    P : Polyhedron
    sense : {"min", "max"}

    Returns
    -------
    LpResult
        Duals are the multipliers of the rows of ``P`` for the minimization
        form (``sense="max"`` reports them for ``min -c.x``).
    """
    c = np.asarray(c, dtype=float).ravel()
    if c.size != P.dim:
        raise ValueError(f"objective has {c.size} entries, polyhedron has {P.dim} coordinates")
    return solve_lp_arrays(c, P.M, P.m, P.nonneg, sense=sense, tol=tol)


def lexmin_arrays(objectives, M, m, nonneg, tol=None):
    objectives = [np.asarray(o, dtype=float).ravel() for o in objectives]
    if not objectives:
        raise ValueError("lexmin needs at least one objective")
    n = objectives[0].size
    M = np.asarray(M, dtype=float).reshape(-1, n)
    m = np.asarray(m, dtype=float).ravel()
    nonneg = np.asarray(nonneg, dtype=bool).ravel()
    rows, rhs = [M], [m]
    values = []
    res = None
    iters = 0
    for obj in objectives:
        Mc, mc = np.vstack(rows), np.concatenate(rhs)
        res = solve_lp_arrays(obj, Mc, mc, nonneg, tol=tol)
        iters += res.iterations
        if not res.optimal:
            return res
        values.append(res.value)
        # restrict to the optimal face by complementary slackness with the
        # dual just found: rows with positive multipliers become tight and
        # flagged variables with positive reduced cost are pinned at zero
        y = res.duals
        cmax = np.abs(obj).max(initial=0.0)
        thr = 1e-9 * (1.0 + cmax)
        scale_rows = np.abs(Mc).max(axis=1, initial=0.0)
        tight = np.flatnonzero(y * scale_rows > thr)
        red = obj - Mc.T @ y
        pinned = np.flatnonzero(nonneg & (red > thr))
        if tight.size:
            rows.append(-Mc[tight])
            rhs.append(-mc[tight])
        if pinned.size:
            E = np.zeros((pinned.size, n))
            E[np.arange(pinned.size), pinned] = -1.0
            rows.append(E)
            rhs.append(np.zeros(pinned.size))
    duals = res.duals[: M.shape[0]]
    return LpResult(LpStatus.OPTIMAL, x=res.x, value=values[-1], duals=duals,
                    iterations=iters, values=tuple(values))


def lexmin(objectives, P, tol=None):
    """Lexicographic minimization: each objective is minimized with the
    earlier ones held at their optimal values."""
    return lexmin_arrays(objectives, P.M, P.m, P.nonneg, tol=tol)


def require_optimal(res):
    if res.status is LpStatus.NUMERIC:
        raise NumericInstability("LP kernel failed to certify an optimal basis")
    return res
