"""Compiled inner loops for the O(n^2) profile algorithms.

Every kernel is ``nogil`` so row blocks can run on a thread pool. On equal
distances the row kernels keep the lowest neighbour index and the diagonal
kernel keeps the first diagonal visited.
"""

import math

import numpy as np
from numba import njit

from ..core import NEAR_ZERO

# Rows per independent block. Each block restarts its dot-product recurrence
# from freshly computed values, bounding accumulated rounding. Block
# boundaries do not depend on the worker count.
BLOCK = 1024


@njit(cache=True, nogil=True, inline="always")
def _zdist(qt, w, mu_i, sig_i, flat_i, mu_j, sig_j, flat_j):
    if flat_i or flat_j:
        if flat_i and flat_j:
            return 0.0
        return math.sqrt(w)
    corr = (qt - w * mu_i * mu_j) / (w * sig_i * sig_j)
    d2 = 2.0 * w * (1.0 - corr)
    if d2 < 0.0:
        d2 = 0.0
    elif d2 > 4.0 * w:
        d2 = 4.0 * w
    return math.sqrt(d2)


@njit(cache=True, nogil=True)
def _zdist_direct(a, i, b, j, w, mu_i, sig_i, mu_j, sig_j):
    s = 0.0
    for k in range(w):
        diff = (a[i + k] - mu_i) / sig_i - (b[j + k] - mu_j) / sig_j
        s += diff * diff
    return math.sqrt(s)


@njit(cache=True, nogil=True, inline="always")
def _is_near(d, w):
    return d * d < NEAR_ZERO * w


@njit(cache=True, nogil=True)
def _dot(a, ia, b, ib, w):
    s = 0.0
    for k in range(w):
        s += a[ia + k] * b[ib + k]
    return s


@njit(cache=True, nogil=True)
def stomp_rows(a, b, w, mu_a, sig_a, flat_a, mu_b, sig_b, flat_b,
               qt_first, qt_col, i0, i1, zone, self_join):
    """Rows ``i0..i1-1`` of the z-normalised distance matrix, reduced to minima.

    ``qt_first`` is the dot-product row of window ``i0`` of ``a`` against every
    window of ``b``; ``qt_col[i]`` the dot product of window ``i`` of ``a``
    with window 0 of ``b``.
    """
    lb = mu_b.shape[0]
    nrows = i1 - i0
    vals = np.full(nrows, np.inf)
    idx = np.full(nrows, -1, dtype=np.int64)
    lvals = np.full(nrows, np.inf)
    lidx = np.full(nrows, -1, dtype=np.int64)
    rvals = np.full(nrows, np.inf)
    ridx = np.full(nrows, -1, dtype=np.int64)
    near = math.sqrt(NEAR_ZERO * w)
    qt = qt_first.copy()
    for i in range(i0, i1):
        if i > i0:
            for j in range(lb - 1, 0, -1):
                qt[j] = qt[j - 1] - a[i - 1] * b[j - 1] + a[i + w - 1] * b[j + w - 1]
            qt[0] = qt_col[i]
        r = i - i0
        for j in range(lb):
            if self_join and abs(i - j) <= zone:
                continue
            d = _zdist(qt[j], w, mu_a[i], sig_a[i], flat_a[i], mu_b[j], sig_b[j], flat_b[j])
            if d < near and not (flat_a[i] or flat_b[j]):
                d = _zdist_direct(a, i, b, j, w, mu_a[i], sig_a[i], mu_b[j], sig_b[j])
            if d < vals[r]:
                vals[r] = d
                idx[r] = j
            if self_join:
                if j < i:
                    if d < lvals[r]:
                        lvals[r] = d
                        lidx[r] = j
                elif d < rvals[r]:
                    rvals[r] = d
                    ridx[r] = j
    return vals, idx, lvals, lidx, rvals, ridx


@njit(cache=True, nogil=True)
def scrimp_diagonals(a, w, mu, sig, flat, diagonals,
                     vals, idx, lvals, lidx, rvals, ridx):
    """Walk whole diagonals of the self-join distance matrix, updating in place.

    A cell on diagonal ``k`` pairs window ``i`` with window ``i + k``; it is a
    right-neighbour candidate for ``i`` and a left-neighbour candidate for
    ``i + k``.
    """
    size = mu.shape[0]
    for t in range(diagonals.shape[0]):
        k = diagonals[t]
        qt = 0.0
        for i in range(size - k):
            j = i + k
            if (i % BLOCK) == 0:
                qt = _dot(a, i, a, j, w)
            else:
                qt = qt - a[i - 1] * a[j - 1] + a[i + w - 1] * a[j + w - 1]
            d = _zdist(qt, w, mu[i], sig[i], flat[i], mu[j], sig[j], flat[j])
            if _is_near(d, w) and not (flat[i] or flat[j]):
                d = _zdist_direct(a, i, a, j, w, mu[i], sig[i], mu[j], sig[j])
            if d < vals[i]:
                vals[i] = d
                idx[i] = j
            if d < rvals[i]:
                rvals[i] = d
                ridx[i] = j
            if d < vals[j]:
                vals[j] = d
                idx[j] = i
            if d < lvals[j]:
                lvals[j] = d
                lidx[j] = i


@njit(cache=True, nogil=True)
def _rank_dims(dist, must, admissible, order):
    """Fill ``order`` with the admissible dims: forced ones first, then by distance.

    Insertion sort keyed on (not forced, distance); stable, so equal distances
    keep ascending dimension order.
    """
    n = 0
    for k in range(dist.shape[0]):
        if not admissible[k]:
            continue
        pos = n
        while pos > 0:
            prev = order[pos - 1]
            if must[prev] and not must[k]:
                break
            if must[prev] == must[k] and dist[prev] <= dist[k]:
                break
            order[pos] = prev
            pos -= 1
        order[pos] = k
        n += 1
    return n


@njit(cache=True, nogil=True)
def mstomp_rows(x, w, mu, sig, flat, qt_first, qt_col, i0, i1, zone, must, admissible):
    """Rows ``i0..i1-1`` of every k-dimensional profile.

    ``x`` is ``(n, d)``; ``mu``/``sig``/``flat`` are ``(L, d)``; ``qt_first``
    is ``(d, L)`` for row ``i0``; ``qt_col`` is ``(L, d)`` against window 0.
    Returns values and indexes of shape ``(d, rows)`` and the dimension ranking
    at each chosen pair, shape ``(d, d, rows)``.
    """
    size = mu.shape[0]
    nd = x.shape[1]
    nrows = i1 - i0
    n_adm = 0
    for k in range(nd):
        if admissible[k]:
            n_adm += 1
    vals = np.full((nd, nrows), np.inf)
    idx = np.full((nd, nrows), -1, dtype=np.int64)
    ranks = np.empty((nd, nd, nrows), dtype=np.int64)
    for k in range(nd):
        for r in range(nrows):
            for s in range(nd):
                ranks[k, s, r] = s
    qt = qt_first.copy()
    dist = np.empty(nd)
    order = np.empty(nd, dtype=np.int64)
    for i in range(i0, i1):
        if i > i0:
            for dim in range(nd):
                if not admissible[dim]:
                    continue
                for j in range(size - 1, 0, -1):
                    qt[dim, j] = (qt[dim, j - 1] - x[i - 1, dim] * x[j - 1, dim]
                                  + x[i + w - 1, dim] * x[j + w - 1, dim])
                qt[dim, 0] = qt_col[i, dim]
        r = i - i0
        for j in range(size):
            if abs(i - j) <= zone:
                continue
            for dim in range(nd):
                if admissible[dim]:
                    d = _zdist(qt[dim, j], w, mu[i, dim], sig[i, dim], flat[i, dim],
                               mu[j, dim], sig[j, dim], flat[j, dim])
                    if _is_near(d, w) and not (flat[i, dim] or flat[j, dim]):
                        col = x[:, dim]
                        d = _zdist_direct(col, i, col, j, w, mu[i, dim], sig[i, dim], mu[j, dim], sig[j, dim])
                    dist[dim] = d
            _rank_dims(dist, must, admissible, order)
            acc = 0.0
            for k in range(n_adm):
                acc += dist[order[k]]
                v = acc / (k + 1)
                if v < vals[k, r]:
                    vals[k, r] = v
                    idx[k, r] = j
                    pos = 0
                    for s in range(n_adm):
                        ranks[k, pos, r] = order[s]
                        pos += 1
                    for s in range(nd):
                        if not admissible[s]:
                            ranks[k, pos, r] = s
                            pos += 1
    return vals, idx, ranks


@njit(cache=True, nogil=True)
def blocked_sqnorms(x, w):
    """Squared window norms per dimension, restarted directly at every block start.

    Follows the same restart schedule and operation order as ``simple_rows``
    so the diagonal of a join of a series with itself cancels exactly.
    """
    n, nd = x.shape
    size = n - w + 1
    out = np.empty((size, nd))
    for dim in range(nd):
        col = x[:, dim]
        for i in range(size):
            if (i % BLOCK) == 0:
                out[i, dim] = _dot(col, i, col, i, w)
            else:
                out[i, dim] = out[i - 1, dim] - col[i - 1] * col[i - 1] + col[i + w - 1] * col[i + w - 1]
    return out


@njit(cache=True, nogil=True)
def simple_rows(a, b, w, norm_a, norm_b, i0, i1, zone, self_join):
    """Rows of the non-normalised multidimensional distance matrix, reduced to minima."""
    la = a.shape[0] - w + 1
    lb = b.shape[0] - w + 1
    nd = a.shape[1]
    nrows = i1 - i0
    vals = np.full(nrows, np.inf)
    idx = np.full(nrows, -1, dtype=np.int64)
    lvals = np.full(nrows, np.inf)
    lidx = np.full(nrows, -1, dtype=np.int64)
    rvals = np.full(nrows, np.inf)
    ridx = np.full(nrows, -1, dtype=np.int64)
    qt = np.empty((nd, lb))
    for dim in range(nd):
        ca = a[:, dim]
        cb = b[:, dim]
        for j in range(lb):
            qt[dim, j] = _dot(ca, i0, cb, j, w)
    for i in range(i0, i1):
        if i > i0:
            for dim in range(nd):
                ca = a[:, dim]
                cb = b[:, dim]
                for j in range(lb - 1, 0, -1):
                    qt[dim, j] = qt[dim, j - 1] - ca[i - 1] * cb[j - 1] + ca[i + w - 1] * cb[j + w - 1]
                qt[dim, 0] = _dot(ca, i, cb, 0, w)
        r = i - i0
        for j in range(lb):
            if self_join and abs(i - j) <= zone:
                continue
            s = 0.0
            scale = 0.0
            for dim in range(nd):
                s += norm_a[i, dim] + norm_b[j, dim] - 2.0 * qt[dim, j]
                scale += norm_a[i, dim] + norm_b[j, dim]
            if s < NEAR_ZERO * scale:
                s = 0.0
                for dim in range(nd):
                    for k in range(w):
                        diff = a[i + k, dim] - b[j + k, dim]
                        s += diff * diff
            d = math.sqrt(s) if s > 0.0 else 0.0
            if d < vals[r]:
                vals[r] = d
                idx[r] = j
            if self_join:
                if j < i:
                    if d < lvals[r]:
                        lvals[r] = d
                        lidx[r] = j
                elif d < rvals[r]:
                    rvals[r] = d
                    ridx[r] = j
    return vals, idx, lvals, lidx, rvals, ridx
