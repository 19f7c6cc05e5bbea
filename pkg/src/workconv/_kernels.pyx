# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled majorisation kernels; see ``_kernels_py`` for the reference semantics."""

import numpy as np


def partial_sum_gaps(x, y):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], k
    cdef double acc = 0.0
    out = np.zeros(n - 1 if n > 1 else 0, dtype=np.float64)
    cdef double[::1] ov = out
    for k in range(n - 1):
        acc += xv[k] - yv[k]
        ov[k] = acc
    return out.tolist()


def t_transform_chain(x, y, double tol=1e-12):
    cdef double[::1] xv = np.array(x, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i, j, k, step
    cdef double excess, deficit, moved, t
    chain = []
    for step in range(n):
        j = -1
        for i in range(n):
            if xv[i] - yv[i] > tol:
                j = i
        if j < 0:
            break
        k = -1
        for i in range(j + 1, n):
            if yv[i] - xv[i] > tol:
                k = i
                break
        if k < 0:
            break
        excess = xv[j] - yv[j]
        deficit = yv[k] - xv[k]
        moved = excess if excess < deficit else deficit
        t = 1.0 - moved / (xv[j] - xv[k])
        if excess <= deficit:
            xv[j] = yv[j]
            xv[k] = xv[k] + moved
        else:
            xv[j] = xv[j] - moved
            xv[k] = yv[k]
        chain.append((t, j, k))
    return chain


cdef bint _augment(Py_ssize_t u, double[:, ::1] r, Py_ssize_t n, double tol,
                   Py_ssize_t[:, ::1] order, Py_ssize_t[::1] match_col, char[::1] seen):
    cdef Py_ssize_t a, v
    for a in range(n):
        v = order[u, a]
        if r[u, v] > tol and not seen[v]:
            seen[v] = 1
            if match_col[v] < 0 or _augment(match_col[v], r, n, tol, order, match_col, seen):
                match_col[v] = u
                return True
    return False


cdef bint _perfect_matching(double[:, ::1] r, Py_ssize_t n, double tol, Py_ssize_t[:, ::1] order,
                            Py_ssize_t[::1] perm, Py_ssize_t[::1] match_col, char[::1] seen):
    cdef Py_ssize_t u, v
    for v in range(n):
        match_col[v] = -1
    for u in range(n):
        for v in range(n):
            seen[v] = 0
        if not _augment(u, r, n, tol, order, match_col, seen):
            return False
    for v in range(n):
        perm[match_col[v]] = v
    return True


def birkhoff(d, double tol=1e-12):
    cdef double[:, ::1] r = np.array(d, dtype=np.float64, order="C")
    cdef Py_ssize_t n = r.shape[0], i, imin, it
    cdef double w, remaining = 1.0
    perm_arr = np.zeros(n, dtype=np.intp)
    match_arr = np.zeros(n, dtype=np.intp)
    seen_arr = np.zeros(n, dtype=np.int8)
    cdef Py_ssize_t[::1] perm = perm_arr
    cdef Py_ssize_t[::1] match_col = match_arr
    cdef char[::1] seen = seen_arr
    cdef Py_ssize_t[:, ::1] order
    terms = []
    for it in range(n * n):
        if remaining <= tol:
            break
        # larger entries first, ties by column index (stable sort)
        order_arr = np.argsort(-np.asarray(r), axis=1, kind="stable").astype(np.intp)
        order = order_arr
        if not _perfect_matching(r, n, tol, order, perm, match_col, seen):
            break
        w = r[0, perm[0]]
        imin = 0
        for i in range(1, n):
            if r[i, perm[i]] < w:
                w = r[i, perm[i]]
                imin = i
        for i in range(n):
            r[i, perm[i]] -= w
            if r[i, perm[i]] <= tol:
                r[i, perm[i]] = 0.0
        r[imin, perm[imin]] = 0.0
        remaining -= w
        terms.append((w, [int(perm[i]) for i in range(n)]))
    return terms, remaining
