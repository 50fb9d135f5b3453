"""Multidimensional profiles: mSTOMP (k-dimensional, z-normalised) and SiMPle (raw distance)."""

from __future__ import annotations

import numpy as np

from ..core import SlidingDotProduct, as_multi_series, check_window, rolling_mean_std, zone_size
from ..errors import ParameterError
from . import _kernels
from .types import MatrixProfile, MultiMatrixProfile
from .univariate import _check_workers, map_blocks


def _dim_set(dims, d, name):
    dims = tuple(sorted({int(k) for k in (dims or ())}))
    for k in dims:
        if not 0 <= k < d:
            raise ParameterError(f"{name} contains dimension {k}; valid dimensions are 0..{d - 1}")
    return dims


def mstomp(mts, w=None, ez_fraction=0.5, must_dims=(), exc_dims=(), n_workers=1,
           progress=None) -> MultiMatrixProfile:
    """k-dimensional matrix profiles for every k at once.

    For each pair of windows the per-dimension z-normalised distances are
    ranked (``must_dims`` first, ``exc_dims`` dropped) and row ``k`` takes the
    mean of the first ``k + 1``. With fewer admissible dimensions than rows,
    the trailing rows repeat the last admissible one.
    """
    x = as_multi_series(mts, "mts")
    n, d = x.shape
    w = check_window(w, n)
    zone = zone_size(w, ez_fraction)
    n_workers = _check_workers(n_workers)
    must = _dim_set(must_dims, d, "must_dims")
    exc = _dim_set(exc_dims, d, "exc_dims")
    if set(must) & set(exc):
        raise ParameterError(f"dimensions {sorted(set(must) & set(exc))} are both required and excluded")
    if len(exc) == d:
        raise ParameterError("every dimension is excluded")

    x = x - x.mean(axis=0)
    x = np.ascontiguousarray(x)
    stats = [rolling_mean_std(x[:, k], w) for k in range(d)]
    mu = np.ascontiguousarray(np.column_stack([s.means for s in stats]))
    sig = np.ascontiguousarray(np.column_stack([s.stds for s in stats]))
    flat = np.ascontiguousarray(np.column_stack([s.flat for s in stats]))
    size = mu.shape[0]

    must_mask = np.zeros(d, dtype=np.bool_)
    must_mask[list(must)] = True
    admissible = np.ones(d, dtype=np.bool_)
    admissible[list(exc)] = False

    dotters = [SlidingDotProduct(x[:, k], w) for k in range(d)]
    qt_col = np.ascontiguousarray(np.column_stack([dotters[k](x[:w, k]) for k in range(d)]))

    def run(block):
        i0, i1 = block
        first = np.stack([dotters[k](x[i0 : i0 + w, k]) for k in range(d)])
        return _kernels.mstomp_rows(x, w, mu, sig, flat, first, qt_col, i0, i1, zone, must_mask, admissible)

    blocks = [(i0, min(size, i0 + _kernels.BLOCK)) for i0 in range(0, size, _kernels.BLOCK)]
    parts = map_blocks(run, blocks, n_workers, progress)
    values = np.concatenate([p[0] for p in parts], axis=1)
    index = np.concatenate([p[1] for p in parts], axis=1)
    ranks = np.concatenate([p[2] for p in parts], axis=2)

    n_adm = d - len(exc)
    for k in range(n_adm, d):
        values[k] = values[n_adm - 1]
        index[k] = index[n_adm - 1]
        ranks[k] = ranks[n_adm - 1]

    return MultiMatrixProfile(
        values=values,
        index=index,
        dim_order=ranks,
        window=w,
        exclusion_zone=zone,
        must_dims=must,
        exc_dims=exc,
    )


def simple(mts_a, mts_b=None, w=None, ez_fraction=0.5, n_workers=1, progress=None) -> MatrixProfile:
    """Profile of non-normalised Euclidean distances summed over all dimensions.

    Supports self-joins (with exclusion zone) and AB-joins (without).
    """
    a = as_multi_series(mts_a, "mts_a")
    self_join = mts_b is None
    b = a if self_join else as_multi_series(mts_b, "mts_b")
    if a.shape[1] != b.shape[1]:
        raise ParameterError(f"series have {a.shape[1]} and {b.shape[1]} dimensions; they must match")
    w = check_window(w, min(a.shape[0], b.shape[0]))
    zone = zone_size(w, ez_fraction) if self_join else 0
    n_workers = _check_workers(n_workers)

    norm_a = _kernels.blocked_sqnorms(a, w)
    norm_b = norm_a if self_join else _kernels.blocked_sqnorms(b, w)
    la = norm_a.shape[0]

    def run(block):
        i0, i1 = block
        return _kernels.simple_rows(a, b, w, norm_a, norm_b, i0, i1, zone, self_join)

    blocks = [(i0, min(la, i0 + _kernels.BLOCK)) for i0 in range(0, la, _kernels.BLOCK)]
    parts = map_blocks(run, blocks, n_workers, progress)
    vals, idx, _, lidx, _, ridx = (np.concatenate(p) for p in zip(*parts))
    return MatrixProfile(
        values=vals,
        index=idx,
        window=w,
        exclusion_zone=zone,
        mode="simple",
        join_kind="self" if self_join else "ab",
        left_index=lidx if self_join else None,
        right_index=ridx if self_join else None,
        n_dims=a.shape[1],
    )
