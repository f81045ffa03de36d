"""Double-description vertex/ray enumeration for small polyhedra.

The polyhedron is homogenized to the cone ``{(x, t) | M x - m t >= 0,
x_flagged >= 0, t >= 0}`` and its extreme rays are built one constraint at a
time.  Adjacency of a positive/negative ray pair uses the combinatorial test
on zero sets.  Intended as an oracle at desk scale (default ``dim <= 8``).
"""
import numpy as np

from ._config import VERTEX_DIM_CAP
from .errors import DimensionCapExceeded, EmptyPolyhedron
from .polyhedron import VRep

_EPS = 1e-9


def _unit(v):
    s = np.abs(v).max()
    return v / s if s > 0 else v


def _dd_cone(A, eps=_EPS):
    """Generators of ``{y | A y >= 0}``.

    Returns ``(rays, lineality)`` as 2-D arrays.
    """
    d = A.shape[1]
    lin = list(np.eye(d))
    rays = []  # list of np arrays
    zsets = []  # python int bitmasks over processed rows
    for k, a in enumerate(A):
        bit = 1 << k
        if lin:
            vals = np.array([a @ l for l in lin])
            j = int(np.argmax(np.abs(vals)))
            if abs(vals[j]) > eps:
                lstar = lin[j] if vals[j] > 0 else -lin[j]
                av = abs(vals[j])
                new_lin = []
                for i, l in enumerate(lin):
                    if i == j:
                        continue
                    new_lin.append(_unit(l - (a @ l) / av * lstar))
                rays = [r - (a @ r) / av * lstar for r in rays]
                rays = [_unit(r) for r in rays]
                # every old ray now sits on the new hyperplane; l* does not
                zsets = [z | bit for z in zsets]
                rays.append(_unit(lstar))
                # l* is tight on all earlier rows (it was a lineality direction)
                zsets.append((1 << k) - 1)
                lin = new_lin
                continue
            # a is orthogonal to the lineality space: ordinary step
        vals = np.array([a @ r for r in rays]) if rays else np.zeros(0)
        pos = [i for i in range(len(rays)) if vals[i] > eps]
        neg = [i for i in range(len(rays)) if vals[i] < -eps]
        zer = [i for i in range(len(rays)) if abs(vals[i]) <= eps]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_z = [zsets[i] for i in pos] + [zsets[i] | bit for i in zer]
        for ip in pos:
            for ineg in neg:
                common = zsets[ip] & zsets[ineg]
                adjacent = True
                for t in range(len(rays)):
                    if t == ip or t == ineg:
                        continue
                    if (zsets[t] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                r = vals[ip] * rays[ineg] - vals[ineg] * rays[ip]
                new_rays.append(_unit(r))
                new_z.append(common | bit)
        rays, zsets = new_rays, new_z
    R = np.array(rays) if rays else np.zeros((0, d))
    L = np.array(lin) if lin else np.zeros((0, d))
    return R, L


def _dedup(points, tol=1e-9):
    out = []
    for p in points:
        if all(np.abs(p - q).max() > tol * (1.0 + np.abs(q).max()) for q in out):
            out.append(p)
    return out


def enumerate_vertices(P, cap=VERTEX_DIM_CAP):
    """Minkowski-Weyl decomposition ``P = conv(vertices) + cone(rays)``.

    Lines in ``P`` are returned as a pair of opposite rays, and the vertices
    are then the minimal-face representatives lying orthogonal to them.

    Raises
    ------
    DimensionCapExceeded
        If ``P.dim > cap``.
    EmptyPolyhedron
    """
    n = P.dim
    if n > cap:
        raise DimensionCapExceeded(f"vertex enumeration capped at dimension {cap}, got {n}")
    rows = []
    rows.append(np.r_[np.zeros(n), 1.0])  # t >= 0
    M = np.asarray(P.M)
    m = np.asarray(P.m)
    for a, b in zip(M, m):
        s = max(np.abs(a).max(initial=0.0), abs(b))
        if s == 0:
            continue
        rows.append(np.r_[a, -b] / s)
    for i, c in enumerate(P.coords):
        if c.nonneg:
            e = np.zeros(n + 1)
            e[i] = 1.0
            rows.append(e)
    A = np.array(rows)
    R, L = _dd_cone(A)
    verts, rays = [], []
    for r in R:
        t = r[-1]
        if t > _EPS:
            verts.append(r[:n] / t)
        else:
            v = r[:n]
            if np.abs(v).max() > _EPS:
                rays.append(_unit(v))
    for l in L:
        v = l[:n]
        if np.abs(v).max() > _EPS:
            rays.append(_unit(v))
            rays.append(_unit(-v))
    if not verts:
        raise EmptyPolyhedron("vertex enumeration found no vertex")
    verts = _dedup(verts)
    rays = _dedup(rays)
    return VRep(np.array(verts), np.array(rays) if rays else np.zeros((0, n)))


def hull_membership(V, R, x, tol=1e-7):
    """Is ``x`` in ``conv(V) + cone(R)``?  Solved as a small feasibility LP."""
    from .lp import LpStatus, solve_lp_arrays

    V = np.atleast_2d(np.asarray(V, dtype=float))
    R = np.asarray(R, dtype=float).reshape(-1, V.shape[1])
    x = np.asarray(x, dtype=float)
    k, r = V.shape[0], R.shape[0]
    G = np.hstack([V.T, R.T])
    rows = np.vstack([G, -G, np.r_[np.ones(k), np.zeros(r)][None, :], -np.r_[np.ones(k), np.zeros(r)][None, :]])
    sl = tol * (1.0 + np.abs(x))
    rhs = np.concatenate([x - sl, -x - sl, [1.0], [-1.0]])
    res = solve_lp_arrays(np.zeros(k + r), rows, rhs, np.ones(k + r, dtype=bool))
    return res.status is LpStatus.OPTIMAL
