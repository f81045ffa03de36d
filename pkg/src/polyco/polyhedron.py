"""H-representation polyhedra over named coordinates.

A :class:`Polyhedron` is the set ``{x | M x >= m, x_i >= 0 for flagged i}``.
Everything here is a pure function returning new, read-only objects.
"""
from dataclasses import dataclass
import json
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from ._config import ZERO_TOL, get_tol
from .errors import CoordinateError, DimensionMismatch, EmptyPolyhedron
from .lp import LpStatus, solve_lp_arrays


@dataclass(frozen=True)
class Coord:
    """A coordinate label: name, unit string and the implicit ``x >= 0`` flag."""

    name: str
    unit: str = ""
    nonneg: bool = True

    def renamed(self, name):
        return Coord(name, self.unit, self.nonneg)


def _as_coord(c):
    if isinstance(c, Coord):
        return c
    if isinstance(c, str):
        return Coord(c)
    if isinstance(c, dict):
        return Coord(str(c["name"]), str(c.get("unit", "")), bool(c.get("nonneg", True)))
    if isinstance(c, (tuple, list)):
        return Coord(*c)
    raise TypeError(f"cannot interpret {c!r} as a coordinate")


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class Polyhedron:
    """Polyhedron ``{x | M x >= m}`` with per-coordinate nonnegativity flags.

    Parameters
    ----------
    coords : sequence of Coord, str or dict
        Coordinate labels; names must be unique.
    M : array_like, shape (rows, len(coords))
    m : array_like, shape (rows,)

    Examples
    --------
    >>> P = Polyhedron(["x", "y"], [[1, 1]], [1])
    >>> P.contains([0.5, 0.5])
    True
    """

    __slots__ = ("coords", "M", "m", "_index")

    def __init__(self, coords, M=None, m=None):
        coords = tuple(_as_coord(c) for c in coords)
        n = len(coords)
        names = [c.name for c in coords]
        if len(set(names)) != n:
            dup = sorted({x for x in names if names.count(x) > 1})
            raise CoordinateError(f"duplicate coordinate labels: {dup}")
        if M is None:
            M = np.zeros((0, n))
        M = np.asarray(M, dtype=float)
        if M.size == 0:
            rows = M.shape[0] if M.ndim == 2 else 0
            M = np.zeros((rows, n))
        if M.ndim == 1:
            M = M.reshape(1, -1)
        if m is None:
            m = np.zeros(M.shape[0])
        m = np.asarray(m, dtype=float).ravel()
        if M.shape[1] != n:
            raise DimensionMismatch(f"M has {M.shape[1]} columns for {n} coordinates")
        if M.shape[0] != m.size:
            raise DimensionMismatch(f"M has {M.shape[0]} rows but m has {m.size} entries")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "M", _frozen(M))
        object.__setattr__(self, "m", _frozen(m))
        object.__setattr__(self, "_index", {c.name: i for i, c in enumerate(coords)})

    def __setattr__(self, key, value):
        raise AttributeError("Polyhedron is immutable")

    # -- basic accessors ---------------------------------------------------
    @property
    def names(self):
        return tuple(c.name for c in self.coords)

    @property
    def nonneg(self):
        return np.array([c.nonneg for c in self.coords], dtype=bool)

    @property
    def dim(self):
        return len(self.coords)

    @property
    def nrows(self):
        return self.M.shape[0]

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise CoordinateError(f"unknown coordinate {label!r}") from None

    def __repr__(self):
        return f"Polyhedron(dim={self.dim}, rows={self.nrows}, coords={list(self.names)})"

    # -- membership --------------------------------------------------------
    def contains(self, x, tol=None):
        """Membership test up to a relative slack ``tol``."""
        tol = get_tol(tol)
        x = np.asarray(x, dtype=float).ravel()
        if x.size != self.dim:
            raise DimensionMismatch(f"point has {x.size} entries, polyhedron has {self.dim}")
        nn = self.nonneg
        if np.any(x[nn] < -tol * (1.0 + np.abs(x).max(initial=0.0))):
            return False
        if self.nrows == 0:
            return True
        lhs = self.M @ x
        slack = tol * (1.0 + np.abs(self.M) @ np.abs(x) + np.abs(self.m))
        return bool(np.all(lhs >= self.m - slack))

    def contains_many(self, X, tol=None):
        """Vectorized :meth:`contains` for the rows of ``X``."""
        tol = get_tol(tol)
        X = np.atleast_2d(np.asarray(X, dtype=float))
        ok = np.ones(X.shape[0], dtype=bool)
        nn = self.nonneg
        scale = 1.0 + np.abs(X).max(axis=1, initial=0.0)
        if nn.any():
            ok &= np.all(X[:, nn] >= -tol * scale[:, None], axis=1)
        if self.nrows:
            lhs = X @ self.M.T
            slack = tol * (1.0 + np.abs(X) @ np.abs(self.M).T + np.abs(self.m)[None, :])
            ok &= np.all(lhs >= self.m[None, :] - slack, axis=1)
        return ok

    def is_empty(self, tol=None):
        res = solve_lp_arrays(np.zeros(self.dim), self.M, self.m, self.nonneg, tol=tol)
        if res.status is LpStatus.NUMERIC:
            from .errors import NumericInstability

            raise NumericInstability("feasibility LP failed")
        return res.status is LpStatus.INFEASIBLE

    # -- derived polyhedra -------------------------------------------------
    def with_rows(self, M, m):
        return Polyhedron(self.coords, M, m)

    def rename(self, mapping=None, prefix=None):
        """Relabel coordinates by a dict and/or a string prefix."""
        mapping = mapping or {}
        out = []
        for c in self.coords:
            name = mapping.get(c.name, c.name)
            if prefix:
                name = prefix + name
            out.append(c.renamed(name))
        return Polyhedron(out, self.M, self.m)

    def reorder(self, labels):
        """Permute coordinates into the order of ``labels`` (a full permutation)."""
        idx = [self.index(l) for l in labels]
        if sorted(idx) != list(range(self.dim)):
            raise CoordinateError("reorder needs every coordinate exactly once")
        return Polyhedron([self.coords[i] for i in idx], self.M[:, idx], self.m)

    def materialize_nonneg(self, labels=None):
        """Return an equivalent polyhedron where the flags on ``labels``
        (default: all flagged coordinates) are explicit rows."""
        if labels is None:
            idx = [i for i, c in enumerate(self.coords) if c.nonneg]
        else:
            idx = [self.index(l) for l in labels if self.coords[self.index(l)].nonneg]
        if not idx:
            return self
        E = np.zeros((len(idx), self.dim))
        E[np.arange(len(idx)), idx] = 1.0
        coords = [Coord(c.name, c.unit, False) if i in idx else c for i, c in enumerate(self.coords)]
        return Polyhedron(coords, np.vstack([self.M, E]), np.concatenate([self.m, np.zeros(len(idx))]))

    # -- serialization -----------------------------------------------------
    def to_dict(self):
        return {
            "coords": [{"name": c.name, "unit": c.unit, "nonneg": c.nonneg} for c in self.coords],
            "rows": [{"coeffs": [float(v) for v in row], "rhs": float(r)} for row, r in zip(self.M, self.m)],
        }

    def to_json(self, indent=1):
        return dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d):
        coords = [_as_coord(c) for c in d["coords"]]
        rows = d.get("rows", [])
        M = np.array([r["coeffs"] for r in rows], dtype=float).reshape(len(rows), len(coords))
        m = np.array([r["rhs"] for r in rows], dtype=float)
        return cls(coords, M, m)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _fmt_float(v):
    v = float(v)
    if v != v or v in (float("inf"), float("-inf")):
        raise ValueError("non-finite values are not serializable")
    if v == int(v) and abs(v) < 1e16:
        return repr(float(int(v)))
    return format(v, ".17g")


def _dump(obj, indent, level):
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = ", " if indent is None else ","
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(str(k)) + ": " + _dump(v, indent, level + 1) for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_dump(v, None, 0) for v in obj) + "]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=1):
    """JSON text with every non-integral float written to 17 significant digits."""
    return _dump(obj, indent, 0)


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone ``{d | M d >= 0}`` intersected with flagged ``d_i >= 0``."""

    coords: tuple
    M: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_as_coord(c) for c in self.coords))
        M = np.asarray(self.M, dtype=float).reshape(-1, len(self.coords))
        object.__setattr__(self, "M", _frozen(M))

    @property
    def dim(self):
        return len(self.coords)

    @property
    def nonneg(self):
        return np.array([c.nonneg for c in self.coords], dtype=bool)

    def as_polyhedron(self):
        return Polyhedron(self.coords, self.M, np.zeros(self.M.shape[0]))

    def contains(self, d, tol=None):
        return self.as_polyhedron().contains(d, tol)


@dataclass(frozen=True)
class VRep:
    """Vertex/ray description ``conv(vertices) + cone(rays)``."""

    vertices: np.ndarray
    rays: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float)
        R = np.asarray(self.rays, dtype=float)
        d = V.shape[1] if V.ndim == 2 and V.size else (R.shape[1] if R.ndim == 2 and R.size else 0)
        object.__setattr__(self, "vertices", _frozen(V.reshape(-1, d) if V.size else np.zeros((0, d))))
        object.__setattr__(self, "rays", _frozen(R.reshape(-1, d) if R.size else np.zeros((0, d))))


# ---------------------------------------------------------------------------
# constructors and combinators


def product(P, Q):
    """Cartesian product with a block-diagonal constraint matrix."""
    clash = set(P.names) & set(Q.names)
    if clash:
        raise CoordinateError(f"product needs disjoint labels, shared: {sorted(clash)}")
    M = np.zeros((P.nrows + Q.nrows, P.dim + Q.dim))
    M[: P.nrows, : P.dim] = P.M
    M[P.nrows:, P.dim:] = Q.M
    return Polyhedron(P.coords + Q.coords, M, np.concatenate([P.m, Q.m]))


def stack(P, Q):
    """Intersection of two polyhedra over the same coordinate list."""
    if P.coords != Q.coords:
        raise CoordinateError("stack needs identical coordinate lists")
    return Polyhedron(P.coords, np.vstack([P.M, Q.M]), np.concatenate([P.m, Q.m]))


def _equality_row(P, row):
    vec = np.zeros(P.dim)
    if isinstance(row, dict):
        items = row.items()
    else:
        a, b = row
        items = ((a, 1.0), (b, -1.0))
    for label, coef in items:
        try:
            vec[P._index[label]] += coef
        except KeyError:
            raise CoordinateError(f"equality references unknown coordinate {label!r}") from None
    return vec


def add_equalities(P, E):
    """Append equalities ``e . x = 0`` as two opposing inequality rows each.

    ``E`` is a sequence whose items are either ``(a, b)`` label pairs meaning
    ``x_a = x_b`` or dicts ``{label: coefficient}``.
    """
    E = list(E)
    if not E:
        return P
    rows = np.array([_equality_row(P, r) for r in E])
    M = np.vstack([P.M, rows, -rows])
    return Polyhedron(P.coords, M, np.concatenate([P.m, np.zeros(2 * len(E))]))


def add_inequalities(P, rows, rhs):
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    return Polyhedron(P.coords, np.vstack([P.M, rows]), np.concatenate([P.m, np.ravel(rhs)]))


# ---------------------------------------------------------------------------
# cleanup


def _normalize_rows(M, m, tol):
    """Scale rows to unit max-abs, drop trivial rows, merge duplicates.

    Returns ``(M, m, idx, empty)`` where ``idx`` maps each surviving row to
    an input row and ``empty`` flags a ``0 >= positive`` contradiction.
    """
    if M.shape[0] == 0:
        return M.copy(), m.copy(), np.zeros(0, dtype=int), False
    s = np.abs(M).max(axis=1, initial=0.0)
    zero = s <= ZERO_TOL * np.maximum(1.0, np.abs(m))
    if np.any(zero & (m > tol)):
        return None, None, None, True
    keep = np.flatnonzero(~zero)
    Mn = M[keep] / s[keep, None]
    mn = m[keep] / s[keep]
    Mn[np.abs(Mn) < ZERO_TOL] = 0.0
    if Mn.shape[0] == 0:
        return Mn, mn, keep, False
    key = np.round(Mn, 10) + 0.0
    _, inv = np.unique(key, axis=0, return_inverse=True)
    inv = np.asarray(inv).ravel()
    best = {}
    for i, g in enumerate(inv):
        j = best.get(g)
        if j is None or mn[i] > mn[j]:
            best[g] = i
    sel = np.array(sorted(best.values()), dtype=int)
    return Mn[sel], mn[sel], keep[sel], False


def _empty_like(coords):
    return Polyhedron(coords, np.zeros((1, len(coords))), np.ones(1))


def normalize(P, tol=None):
    """Row-scaled, deduplicated copy of ``P`` (same feasible set)."""
    tol = get_tol(tol)
    M, m, _, empty = _normalize_rows(np.asarray(P.M), np.asarray(P.m), tol)
    if empty:
        return _empty_like(P.coords)
    return Polyhedron(P.coords, M, m)


def _implied_by_flags(M, m, nonneg):
    """Rows already implied by the implicit sign constraints alone."""
    if M.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    ok = m <= 0
    if (~nonneg).any():
        ok &= np.all(M[:, ~nonneg] == 0.0, axis=1)
    if nonneg.any():
        ok &= np.all(M[:, nonneg] >= 0.0, axis=1)
    return ok


def irredundant_rows(P, tol=None):
    """Indices (into ``P``'s rows) of an irredundant subsystem.

    Raises
    ------
    EmptyPolyhedron
        If ``P`` has no feasible point.
    """
    tol = get_tol(tol)
    M0, m0 = np.asarray(P.M), np.asarray(P.m)
    nonneg = P.nonneg
    M, m, idx, empty = _normalize_rows(M0, m0, tol)
    if empty:
        raise EmptyPolyhedron("polyhedron contains a 0 >= positive row")
    res = solve_lp_arrays(np.zeros(P.dim), M, m, nonneg, tol=tol)
    if res.status is LpStatus.INFEASIBLE:
        raise EmptyPolyhedron("polyhedron is empty")
    alive = ~_implied_by_flags(M, m, nonneg)
    for i in range(M.shape[0]):
        if not alive[i]:
            continue
        alive[i] = False
        others = np.flatnonzero(alive)
        r = solve_lp_arrays(M[i], M[others], m[others], nonneg, tol=tol)
        if r.status is LpStatus.OPTIMAL:
            if r.value < m[i] - tol * (1.0 + abs(m[i])):
                alive[i] = True
        elif r.status is LpStatus.UNBOUNDED:
            alive[i] = True
        elif r.status is LpStatus.NUMERIC:
            alive[i] = True  # keep the row when the LP cannot decide
        else:
            # the remaining rows alone are infeasible: impossible for a nonempty P
            alive[i] = True
    return idx[alive], M[alive], m[alive]


def remove_redundancy(P, tol=None):
    """Delete implied rows, keeping the feasible set unchanged.

    Every surviving row ``i`` satisfies ``min M_i x`` over the other rows
    ``< m_i - tol`` (or the minimum is unbounded).
    """
    _, M, m = irredundant_rows(P, tol)
    return Polyhedron(P.coords, M, m)


# ---------------------------------------------------------------------------
# projection


def _fme_arrays(M, m, j, tol):
    col = M[:, j]
    pos = col > ZERO_TOL
    neg = col < -ZERO_TOL
    zer = ~(pos | neg)
    parts_M = [M[zer]]
    parts_m = [m[zer]]
    if pos.any() and neg.any():
        Mp = np.ascontiguousarray(M[pos])
        Mq = np.ascontiguousarray(M[neg])
        cm, cr = _backend.fme_combine(Mp, np.ascontiguousarray(m[pos]), Mq,
                                      np.ascontiguousarray(m[neg]), j)
        parts_M.append(np.asarray(cm))
        parts_m.append(np.asarray(cr))
    out_M = np.delete(np.vstack(parts_M), j, axis=1)
    out_m = np.concatenate(parts_m)
    return out_M, out_m


def fme_eliminate(P, coord, tol=None, normalize_rows=True):
    """Fourier-Motzkin elimination of one coordinate.

    The coordinate's nonnegativity flag, if set, becomes an explicit row
    first.  The result has at most ``z + p*q`` rows where ``z``, ``p`` and
    ``q`` count the zero, positive and negative coefficients on ``coord``.
    """
    tol = get_tol(tol)
    j = P.index(coord)
    M, m = np.asarray(P.M), np.asarray(P.m)
    if P.coords[j].nonneg:
        e = np.zeros((1, P.dim))
        e[0, j] = 1.0
        M = np.vstack([M, e])
        m = np.concatenate([m, [0.0]])
    out_M, out_m = _fme_arrays(M, m, j, tol)
    coords = P.coords[:j] + P.coords[j + 1:]
    if normalize_rows:
        out_M, out_m, _, empty = _normalize_rows(out_M, out_m, tol)
        if empty:
            return _empty_like(coords)
    return Polyhedron(coords, out_M, out_m)


def _fill_in(M, j, nonneg_j):
    col = M[:, j]
    p = int(np.count_nonzero(col > ZERO_TOL)) + (1 if nonneg_j else 0)
    q = int(np.count_nonzero(col < -ZERO_TOL))
    return p * q - p - q


def project(P, keep, redundancy=True, tol=None, row_limit=None):
    """Exact projection onto the coordinates in ``keep``.

    Coordinates are eliminated greedily (smallest ``p*q`` fill-in first) with
    redundancy removal after each step when ``redundancy`` is true.  The
    surviving coordinates keep their original order.  If ``row_limit`` is
    given and an intermediate system exceeds it, :class:`RowLimitExceeded` is
    raised carrying the partial result.
    """
    keep = list(keep)
    for k in keep:
        P.index(k)
    keep_set = set(keep)
    todo = [c.name for c in P.coords if c.name not in keep_set]
    Q = P
    while todo:
        if Q.nrows == 0:
            # no constraints: eliminating is just dropping
            idx = [i for i, c in enumerate(Q.coords) if c.name in keep_set]
            Q = Polyhedron([Q.coords[i] for i in idx], np.zeros((0, len(idx))), np.zeros(0))
            break
        scores = [(_fill_in(np.asarray(Q.M), Q.index(name), Q.coords[Q.index(name)].nonneg), i)
                  for i, name in enumerate(todo)]
        _, pick = min(scores)
        name = todo.pop(pick)
        Q = fme_eliminate(Q, name, tol=tol)
        if _is_trivially_empty(Q):
            return _empty_like(tuple(c for c in P.coords if c.name in keep_set))
        if redundancy:
            try:
                Q = remove_redundancy(Q, tol=tol)
            except EmptyPolyhedron:
                return _empty_like(tuple(c for c in P.coords if c.name in keep_set))
        if row_limit is not None and Q.nrows > row_limit:
            raise RowLimitExceeded(Q, Q.nrows)
    return Q


def _is_trivially_empty(Q):
    return Q.nrows > 0 and np.any(np.all(Q.M == 0.0, axis=1) & (Q.m > 0))


class RowLimitExceeded(Exception):
    def __init__(self, partial, rows):
        super().__init__(f"intermediate system has {rows} rows")
        self.partial = partial
        self.rows = rows


# ---------------------------------------------------------------------------
# recession


def recession_cone(P, tol=None):
    """Recession cone ``{d | M d >= 0}`` of a nonempty polyhedron."""
    if P.is_empty(tol):
        raise EmptyPolyhedron("recession cone of an empty polyhedron")
    return Cone(P.coords, P.M)


def map_coordinates(P, labels: Sequence[str]):
    """Convenience: a point's entries for ``labels``, as an index array."""
    return np.array([P.index(l) for l in labels], dtype=int)


def is_empty(P, tol=None):
    return P.is_empty(tol)


def contains(P, x, tol=None):
    return P.contains(x, tol)
