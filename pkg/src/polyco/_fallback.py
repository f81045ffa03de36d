"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def simplex_iterate(T, basis, ncols, max_iter, tol, bland_after):
    m = T.shape[0] - 1
    N = T.shape[1] - 1
    it = 0
    degenerate = 0
    bland = bland_after <= 0
    while True:
        costs = T[m, :ncols]
        if bland:
            cand = np.flatnonzero(costs < -tol)
            if cand.size == 0:
                return 0, -1, it
            enter = int(cand[0])
        else:
            enter = int(np.argmin(costs)) if ncols else 0
            if ncols == 0 or not costs[enter] < -tol:
                return 0, -1, it

        column = T[:m, enter]
        rows = np.flatnonzero(column > tol)
        if rows.size == 0:
            return 1, enter, it
        ratios = T[rows, N] / column[rows]
        r = -1
        best = 0.0
        for i, ratio in zip(rows, ratios):
            if r < 0:
                r, best = int(i), ratio
                continue
            rtol = 1e-12 * (1.0 + abs(best))
            if ratio < best - rtol:
                r, best = int(i), ratio
            elif ratio <= best + rtol:
                if bland:
                    if basis[i] < basis[r]:
                        r, best = int(i), ratio
                elif column[i] > column[r]:
                    r, best = int(i), ratio

        if T[r, N] <= tol:
            degenerate += 1
            if degenerate >= bland_after:
                bland = True
        else:
            degenerate = 0

        T[r] /= T[r, enter]
        f = T[:, enter].copy()
        f[r] = 0.0
        nz = np.flatnonzero(f)
        T[nz] -= f[nz, None] * T[r]
        T[nz, enter] = 0.0
        T[r, enter] = 1.0
        basis[r] = enter
        it += 1
        if it >= max_iter:
            return 2, -1, it


def fme_combine(pos, pos_rhs, neg, neg_rhs, col):
    wp = -neg[:, col]
    wn = pos[:, col]
    out = wp[None, :, None] * pos[:, None, :] + wn[:, None, None] * neg[None, :, :]
    rhs = wp[None, :] * pos_rhs[:, None] + wn[:, None] * neg_rhs[None, :]
    out = out.reshape(-1, pos.shape[1])
    out[:, col] = 0.0
    return out, rhs.reshape(-1)
