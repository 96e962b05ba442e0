"""Pure-numpy reference kernels.

Same signatures as the compiled module; selected automatically when the
extension is unavailable. All arrays are C-contiguous: ``indptr`` and
``indices`` are int64 CSR adjacency, ``weights`` holds w_xy per arc.
"""

from collections import deque

import numpy as np


def _segment_sum(vals, indptr):
    """Row sums of per-arc values under a CSR indptr.

    np.add.reduceat misbehaves on empty rows (it returns vals[start]
    instead of 0, and errors when start == len(vals)), so both cases are
    patched up afterwards.
    """
    n = len(indptr) - 1
    if vals.size == 0:
        return np.zeros(n)
    starts = np.minimum(indptr[:-1], vals.size - 1)
    out = np.add.reduceat(vals, starts)
    out[np.diff(indptr) == 0] = 0.0
    return out


def laplacian_csr(indptr, indices, weights, mu, f):
    """(1/mu(x)) * sum_{y~x} w_xy (f(y) - f(x))."""
    f_src = np.repeat(f, np.diff(indptr))
    contrib = weights * (f[indices] - f_src)
    return _segment_sum(contrib, indptr) / mu


def gamma_csr(indptr, indices, weights, mu, f, h):
    """(1/(2 mu(x))) * sum_{y~x} w_xy (f(y) - f(x)) (h(y) - h(x))."""
    counts = np.diff(indptr)
    df = f[indices] - np.repeat(f, counts)
    dh = h[indices] - np.repeat(h, counts)
    return _segment_sum(weights * df * dh, indptr) / (2.0 * mu)


def bfs_csr(indptr, indices, source):
    """Hop distances from ``source``; -1 marks unreachable vertices."""
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        dx = dist[x]
        for y in indices[indptr[x]:indptr[x + 1]]:
            if dist[y] < 0:
                dist[y] = dx + 1
                queue.append(y)
    return dist


def eccentricities_csr(indptr, indices):
    """Max finite hop distance per source; -1 where the graph is disconnected."""
    n = len(indptr) - 1
    ecc = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist = bfs_csr(indptr, indices, s)
        ecc[s] = -1 if (dist < 0).any() else int(dist.max())
    return ecc
