# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: tableau simplex pivoting and Fourier-Motzkin pairing.

Both functions mirror ``polyco._fallback`` operation for operation, so the
two backends agree to floating-point round-off.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def simplex_iterate(double[:, ::1] T, cnp.intp_t[::1] basis, Py_ssize_t ncols,
                    Py_ssize_t max_iter, double tol, Py_ssize_t bland_after):
    """Pivot the tableau ``T`` in place until optimal, unbounded or out of budget.

    Returns ``(status, entering, iterations)`` with status 0 = optimal,
    1 = unbounded along column ``entering``, 2 = iteration limit.
    """
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t N = T.shape[1] - 1
    cdef Py_ssize_t it = 0, degenerate = 0
    cdef bint bland = bland_after <= 0
    cdef Py_ssize_t i, j, k, r, enter
    cdef double best, val, ratio, piv, f, rtol

    while True:
        enter = -1
        best = -tol
        for j in range(ncols):
            val = T[m, j]
            if val < best:
                enter = j
                if bland:
                    break
                best = val
        if enter < 0:
            return 0, -1, it

        r = -1
        best = 0.0
        for i in range(m):
            val = T[i, enter]
            if val > tol:
                ratio = T[i, N] / val
                if r < 0:
                    r = i
                    best = ratio
                else:
                    rtol = 1e-12 * (1.0 + abs(best))
                    if ratio < best - rtol:
                        r = i
                        best = ratio
                    elif ratio <= best + rtol:
                        # tie: Bland takes the smallest basic index, otherwise
                        # the largest pivot element for stability
                        if bland:
                            if basis[i] < basis[r]:
                                r = i
                                best = ratio
                        elif val > T[r, enter]:
                            r = i
                            best = ratio
        if r < 0:
            return 1, enter, it

        if T[r, N] <= tol:
            degenerate += 1
            if degenerate >= bland_after:
                bland = True
        else:
            degenerate = 0

        piv = T[r, enter]
        for k in range(N + 1):
            T[r, k] = T[r, k] / piv
        for i in range(m + 1):
            if i == r:
                continue
            f = T[i, enter]
            if f != 0.0:
                for k in range(N + 1):
                    T[i, k] = T[i, k] - f * T[r, k]
                T[i, enter] = 0.0
        T[r, enter] = 1.0
        basis[r] = enter
        it += 1
        if it >= max_iter:
            return 2, -1, it


def fme_combine(double[:, ::1] pos, double[::1] pos_rhs, double[:, ::1] neg,
                double[::1] neg_rhs, Py_ssize_t col):
    """All positive/negative row pairs with ``col`` cancelled (``col`` kept as 0)."""
    cdef Py_ssize_t p = pos.shape[0], q = neg.shape[0], n = pos.shape[1]
    out_np = np.empty((p * q, n), dtype=np.float64)
    rhs_np = np.empty(p * q, dtype=np.float64)
    cdef double[:, ::1] out = out_np
    cdef double[::1] rhs = rhs_np
    cdef Py_ssize_t i, k, c, row = 0
    cdef double wp, wn
    for i in range(p):
        for k in range(q):
            wp = -neg[k, col]
            wn = pos[i, col]
            for c in range(n):
                out[row, c] = wp * pos[i, c] + wn * neg[k, c]
            out[row, col] = 0.0
            rhs[row] = wp * pos_rhs[i] + wn * neg_rhs[k]
            row += 1
    return out_np, rhs_np
