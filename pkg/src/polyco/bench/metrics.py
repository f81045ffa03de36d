"""Grid reference frontiers and frontier-quality metrics (2-D, min sense)."""
import numpy as np

from ..convex import _nn_dist, _polyline_dist, normalizer
from ..errors import PointBeyondReference
from ..molp import dominance_filter


def _call_oracle(oracle, X):
    try:
        out = np.asarray(oracle(X), dtype=bool)
        if out.shape == (X.shape[0],):
            return out
    except Exception:
        pass
    return np.array([bool(oracle(x)) for x in X])


def reference_frontier(oracle, box, grid=(500, 500), chunk=1 << 20):
    """Nondominated feasible points of a regular grid over ``box``.

    Parameters
    ----------
    oracle : callable
        Membership test; called on ``(n, d)`` arrays when it supports that,
        point by point otherwise.
    box : sequence of (lo, hi)
        One interval per objective.
    grid : int or sequence of int
        Points per axis (``linspace`` including both ends).

    Notes
    -----
    Along the last axis only the smallest feasible grid value of each line
    can be nondominated, so every grid line is reduced to that value before
    the final :func:`~polyco.molp.dominance_filter` pass.
    """
    box = np.asarray(box, dtype=float)
    d = box.shape[0]
    grid = (int(grid),) * d if np.isscalar(grid) else tuple(int(g) for g in grid)
    axes = [np.linspace(lo, hi, n) if n > 1 else np.array([lo]) for (lo, hi), n in zip(box, grid)]
    heads = np.array(np.meshgrid(*axes[:-1], indexing="ij")).reshape(d - 1, -1).T
    last = axes[-1]
    best = np.full(heads.shape[0], -1)
    per = max(1, chunk // last.size)
    for s in range(0, heads.shape[0], per):
        H = heads[s:s + per]
        X = np.hstack([np.repeat(H, last.size, axis=0), np.tile(last, H.shape[0])[:, None]])
        ok = _call_oracle(oracle, X).reshape(H.shape[0], last.size)
        has = ok.any(axis=1)
        first = np.argmax(ok, axis=1)
        best[s:s + per] = np.where(has, first, -1)
    sel = best >= 0
    pts = np.hstack([heads[sel], last[best[sel]][:, None]])
    if pts.shape[0] == 0:
        return np.zeros((0, d))
    pts = dominance_filter(pts)
    return pts[np.lexsort(pts.T[::-1])]


def cell_diameter(box, grid):
    """Normalized diameter of one grid cell, relative to the box."""
    box = np.asarray(box, dtype=float)
    grid = (int(grid),) * box.shape[0] if np.isscalar(grid) else tuple(grid)
    return float(np.sqrt(sum((1.0 / max(n - 1, 1)) ** 2 for n in grid)))


def densify(front, n):
    """``n`` points equally spaced in arc length along the polyline ``front``."""
    F = np.atleast_2d(np.asarray(front, dtype=float))
    if F.shape[0] < 2 or n <= F.shape[0]:
        return F.copy()
    seg = np.linalg.norm(np.diff(F, axis=0), axis=1)
    s = np.r_[0.0, np.cumsum(seg)]
    if s[-1] == 0:
        return F[:1].copy()
    t = np.linspace(0.0, s[-1], n)
    return np.column_stack([np.interp(t, s, F[:, j]) for j in range(F.shape[1])])


def _sorted(front):
    F = np.atleast_2d(np.asarray(front, dtype=float))
    return F[np.lexsort(F.T[::-1])]


def igd(approx, reference, densify_to=200, as_polyline=True):
    """Mean distance from the densified reference to ``approx``.

    Both fronts are mapped to the ideal-nadir box of the reference.  With
    ``as_polyline`` the approximation is read as the polyline through its
    sorted points, otherwise as a point cloud.
    """
    R = _sorted(reference)
    lo, span = normalizer(R)
    Rn = densify((R - lo) / span, densify_to)
    A = (_sorted(approx) - lo) / span
    d = _polyline_dist(Rn, A) if as_polyline else _nn_dist(Rn, A)
    return float(d.mean())


def hypervolume(front, ref_point, interpolate=True):
    """Area dominated by ``front`` and bounded by ``ref_point`` (2-D, min).

    With ``interpolate`` (default) consecutive nondominated points are joined
    by segments, which is the area of ``conv(front) + R^2_+`` for a convex
    front; otherwise the staircase of the points themselves is used.
    """
    F = np.atleast_2d(np.asarray(front, dtype=float))
    ref = np.asarray(ref_point, dtype=float)
    if F.size == 0:
        return 0.0
    if np.any(F > ref):
        raise PointBeyondReference("every point must dominate the reference point")
    # 2-D staircase: sort by x (then y) and keep strict new minima of y
    F = F[np.lexsort((F[:, 1], F[:, 0]))]
    run = np.minimum.accumulate(F[:, 1])
    keep = np.r_[True, F[1:, 1] < run[:-1]]
    F = F[keep]
    xs = np.r_[F[1:, 0], ref[0]]
    heights = ref[1] - F[:, 1]
    if interpolate:
        heights = heights.copy()
        heights[:-1] = ref[1] - 0.5 * (F[:-1, 1] + F[1:, 1])
    return float(np.sum((xs - F[:, 0]) * heights))


def hv_gap_rel(front, reference, kind="deficit", ref_point=None, normalize=True, interpolate=True,
               clip=False):
    """Relative hypervolume gap of ``front`` against ``reference``.

    ``kind="deficit"`` gives ``(HV(C) - HV(P)) / HV(C)`` and ``"excess"``
    gives ``(HV(P) - HV(C)) / HV(C)``.  By default both fronts are normalized
    to the reference's ideal-nadir box and the reference point is
    ``(1.1, 1.1)``.  With ``clip`` points past the reference point are pulled
    back onto the box first; the part of a dominance region outside the box
    has no area, so this changes nothing but the error.
    """
    R = np.atleast_2d(np.asarray(reference, dtype=float))
    F = np.atleast_2d(np.asarray(front, dtype=float))
    if normalize:
        lo, span = normalizer(R)
        R = (R - lo) / span
        F = (F - lo) / span
        ref = np.full(R.shape[1], 1.1) if ref_point is None else np.asarray(ref_point, float)
    else:
        ref = R.max(axis=0) if ref_point is None else np.asarray(ref_point, float)
    if clip:
        R, F = np.minimum(R, ref), np.minimum(F, ref)
    hc = hypervolume(R, ref, interpolate)
    hp = hypervolume(F, ref, interpolate)
    g = (hc - hp) / hc if kind == "deficit" else (hp - hc) / hc
    return float(g)


def gap_stats(approx_front, reference, axis=1):
    """Shortfall of ``approx_front`` along ``axis`` at the reference points.

    The approximation is interpolated linearly along the other coordinate
    (clamped at its ends); gaps are reported in physical units.

    Returns
    -------
    dict with ``max_gap`` and ``mean_gap``
    """
    A = np.atleast_2d(np.asarray(approx_front, dtype=float))
    R = np.atleast_2d(np.asarray(reference, dtype=float))
    other = 1 - axis
    order = np.argsort(A[:, other], kind="stable")
    A = A[order]
    interp = np.interp(R[:, other], A[:, other], A[:, axis])
    gap = np.abs(R[:, axis] - interp)
    return {"max_gap": float(gap.max()), "mean_gap": float(gap.mean())}
