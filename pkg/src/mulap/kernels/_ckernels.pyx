# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled CSR kernels: Laplacian, gradient form, BFS hop distances.

Mirrors _pykernels; the campaign runner calls these once per graph per
check, so the per-call overhead matters more than asymptotics.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def laplacian_csr(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
                  double[::1] weights, double[::1] mu, double[::1] f):
    """(1/mu(x)) * sum_{y~x} w_xy (f(y) - f(x))."""
    cdef Py_ssize_t n = mu.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t x, j
    cdef double acc, fx
    for x in range(n):
        acc = 0.0
        fx = f[x]
        for j in range(indptr[x], indptr[x + 1]):
            acc += weights[j] * (f[indices[j]] - fx)
        ov[x] = acc / mu[x]
    return out


def gamma_csr(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
              double[::1] weights, double[::1] mu, double[::1] f,
              double[::1] h):
    """(1/(2 mu(x))) * sum_{y~x} w_xy (f(y) - f(x)) (h(y) - h(x))."""
    cdef Py_ssize_t n = mu.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t x, j, y
    cdef double acc, fx, hx
    for x in range(n):
        acc = 0.0
        fx = f[x]
        hx = h[x]
        for j in range(indptr[x], indptr[x + 1]):
            y = indices[j]
            acc += weights[j] * (f[y] - fx) * (h[y] - hx)
        ov[x] = acc / (2.0 * mu[x])
    return out


def bfs_csr(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
            Py_ssize_t source):
    """Hop distances from ``source``; -1 marks unreachable vertices."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] dv = dist
    queue = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] qv = queue
    cdef Py_ssize_t head = 0, tail = 0
    cdef Py_ssize_t x, j
    cdef cnp.int64_t y
    dv[source] = 0
    qv[tail] = source
    tail += 1
    while head < tail:
        x = qv[head]
        head += 1
        for j in range(indptr[x], indptr[x + 1]):
            y = indices[j]
            if dv[y] < 0:
                dv[y] = dv[x] + 1
                qv[tail] = y
                tail += 1
    return dist


def eccentricities_csr(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices):
    """Max finite hop distance per source; -1 where the graph is disconnected."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    ecc = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] ev = ecc
    dist = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] dv = dist
    queue = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] qv = queue
    cdef Py_ssize_t head, tail, s, x, j
    cdef cnp.int64_t y, best
    for s in range(n):
        for x in range(n):
            dv[x] = -1
        head = 0
        tail = 0
        dv[s] = 0
        qv[tail] = s
        tail += 1
        best = 0
        while head < tail:
            x = qv[head]
            head += 1
            if dv[x] > best:
                best = dv[x]
            for j in range(indptr[x], indptr[x + 1]):
                y = indices[j]
                if dv[y] < 0:
                    dv[y] = dv[x] + 1
                    qv[tail] = y
                    tail += 1
        ev[s] = best if tail == n else -1
    return ecc
