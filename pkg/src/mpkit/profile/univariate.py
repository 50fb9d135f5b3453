"""Univariate z-normalised matrix profiles: STAMP, STOMP and SCRIMP."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from ..core import (
    SlidingDotProduct,
    apply_exclusion_zone,
    as_series,
    check_window,
    refine_near_matches,
    rolling_mean_std,
    zone_size,
    znorm_distance_from_dot,
)
from ..errors import ParameterError, UnsupportedModeError
from . import _kernels
from .types import MatrixProfile

DEFAULT_SEED = 0

# Queries per STAMP work unit; fixed so results do not depend on n_workers.
STAMP_CHUNK = 256


def _prepare(ts_a, ts_b, w, ez_fraction):
    a = as_series(ts_a, "ts_a")
    self_join = ts_b is None
    b = a if self_join else as_series(ts_b, "ts_b")
    w = check_window(w, min(a.size, b.size))
    zone = zone_size(w, ez_fraction) if self_join else 0
    # z-normalised distances ignore per-window offsets; centring improves conditioning
    a = a - a.mean()
    b = a if self_join else b - b.mean()
    return a, b, w, zone, self_join


def _check_workers(n_workers):
    n_workers = int(n_workers)
    if n_workers < 1:
        raise ParameterError(f"n_workers must be >= 1, got {n_workers}")
    return n_workers


def _count(s_size, total, what):
    if s_size is None or s_size == math.inf:
        return total
    if s_size < 1:
        raise ParameterError(f"s_size must be >= 1, got {s_size}")
    return min(int(s_size), total)


def map_blocks(fn, blocks, n_workers, progress=None):
    """Apply ``fn`` to each block, in parallel if asked, returning results in block order."""
    total = len(blocks)
    if n_workers == 1 or total <= 1:
        out = []
        for done, blk in enumerate(blocks, 1):
            out.append(fn(blk))
            if progress:
                progress(done, total)
        return out
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        futures = [pool.submit(fn, blk) for blk in blocks]
        out = []
        for done, fut in enumerate(futures, 1):
            out.append(fut.result())
            if progress:
                progress(done, total)
        return out


def _improve(vals, idx, new_vals, new_idx, mask=None):
    better = new_vals < vals
    if mask is not None:
        better &= mask
    vals[better] = new_vals[better]
    idx[better] = new_idx[better] if np.ndim(new_idx) else new_idx


def merge_min(accumulator: MatrixProfile, dp, source_index: int) -> MatrixProfile:
    """Element-wise minimum of a profile and one distance profile.

    On strict improvement the slot takes ``source_index``; ties keep the
    existing neighbour.
    """
    dp = np.asarray(dp, dtype=np.float64)
    if dp.shape != accumulator.values.shape:
        raise ValueError(f"distance profile length {dp.size} does not match profile length {accumulator.size}")
    vals = accumulator.values.copy()
    idx = accumulator.index.copy()
    _improve(vals, idx, dp, int(source_index))
    return replace(accumulator, values=vals, index=idx)


def stamp(ts_a, ts_b=None, w=None, ez_fraction=0.5, s_size=math.inf, n_workers=1,
          seed=DEFAULT_SEED, progress=None) -> MatrixProfile:
    """Anytime matrix profile from distance profiles taken in random order.

    Each query window of the second series (or of ``ts_a`` for a self-join)
    contributes one column of the distance matrix, merged by element-wise
    minimum. Stopping after ``s_size`` queries leaves an upper bound of the
    exact profile.
    """
    a, b, w, zone, self_join = _prepare(ts_a, ts_b, w, ez_fraction)
    n_workers = _check_workers(n_workers)
    stats_a = rolling_mean_std(a, w)
    stats_b = stats_a if self_join else rolling_mean_std(b, w)
    mu_a, sig_a, flat_a = stats_a.means, stats_a.stds, stats_a.flat
    mu_b, sig_b, flat_b = stats_b.means, stats_b.stds, stats_b.flat
    la, lb = len(mu_a), len(mu_b)

    count = _count(s_size, lb, "queries")
    order = np.random.default_rng(seed).permutation(lb)[:count]
    dotter = SlidingDotProduct(a, w)
    positions = np.arange(la)

    def run(chunk):
        vals = np.full(la, np.inf)
        idx = np.full(la, -1, dtype=np.int64)
        lvals = np.full(la, np.inf)
        lidx = np.full(la, -1, dtype=np.int64)
        rvals = np.full(la, np.inf)
        ridx = np.full(la, -1, dtype=np.int64)
        for j in chunk:
            j = int(j)
            qt = dotter(b[j : j + w])
            dp = znorm_distance_from_dot(qt, w, mu_b[j], sig_b[j], mu_a, sig_a, flat_b[j], flat_a)
            refine_near_matches(dp, b[j : j + w], a, mu_b[j], sig_b[j], flat_b[j], stats_a)
            if self_join:
                apply_exclusion_zone(dp, j, zone, inplace=True)
                _improve(lvals, lidx, dp, j, positions > j)
                _improve(rvals, ridx, dp, j, positions < j)
            _improve(vals, idx, dp, j)
        return vals, idx, lvals, lidx, rvals, ridx

    chunks = [order[s : s + STAMP_CHUNK] for s in range(0, count, STAMP_CHUNK)]
    parts = map_blocks(run, chunks, n_workers, progress)

    vals = np.full(la, np.inf)
    idx = np.full(la, -1, dtype=np.int64)
    lvals, lidx = vals.copy(), idx.copy()
    rvals, ridx = vals.copy(), idx.copy()
    for pv, pi, plv, pli, prv, pri in parts:
        _improve(vals, idx, pv, pi)
        _improve(lvals, lidx, plv, pli)
        _improve(rvals, ridx, prv, pri)

    coverage = count / lb
    full = self_join and count == lb
    return MatrixProfile(
        values=vals,
        index=idx,
        window=w,
        exclusion_zone=zone,
        mode="stamp",
        join_kind="self" if self_join else "ab",
        coverage=coverage,
        seed=seed,
        left_index=lidx if full else None,
        right_index=ridx if full else None,
    )


def stomp(ts_a, ts_b=None, w=None, ez_fraction=0.5, n_workers=1, progress=None) -> MatrixProfile:
    """Exact matrix profile by ordered rows with an O(1) dot-product update.

    Rows are processed in fixed blocks; each block starts from an FFT-computed
    dot-product row, so the outcome is the same for any ``n_workers``.
    """
    a, b, w, zone, self_join = _prepare(ts_a, ts_b, w, ez_fraction)
    n_workers = _check_workers(n_workers)
    stats_a = rolling_mean_std(a, w)
    stats_b = stats_a if self_join else rolling_mean_std(b, w)
    la = len(stats_a)

    qt_col = SlidingDotProduct(a, w)(b[:w])
    dot_b = SlidingDotProduct(b, w)
    args = (
        a, b, w,
        stats_a.means, stats_a.stds, stats_a.flat,
        stats_b.means, stats_b.stds, stats_b.flat,
    )

    def run(block):
        i0, i1 = block
        return _kernels.stomp_rows(*args, dot_b(a[i0 : i0 + w]), qt_col, i0, i1, zone, self_join)

    blocks = [(i0, min(la, i0 + _kernels.BLOCK)) for i0 in range(0, la, _kernels.BLOCK)]
    parts = map_blocks(run, blocks, n_workers, progress)
    vals, idx, _, lidx, _, ridx = (np.concatenate(p) for p in zip(*parts))
    return MatrixProfile(
        values=vals,
        index=idx,
        window=w,
        exclusion_zone=zone,
        mode="stomp",
        join_kind="self" if self_join else "ab",
        left_index=lidx if self_join else None,
        right_index=ridx if self_join else None,
    )


def scrimp(ts_a, w=None, ez_fraction=0.5, s_size=math.inf, seed=DEFAULT_SEED,
           progress=None, ts_b=None) -> MatrixProfile:
    """Anytime self-join that walks whole diagonals of the distance matrix in random order.

    ``s_size`` counts diagonals. Each computed cell updates both windows it
    pairs, so partial runs are element-wise upper bounds of the exact profile.
    """
    if ts_b is not None:
        raise UnsupportedModeError("scrimp supports self-joins only")
    a, _, w, zone, _ = _prepare(ts_a, None, w, ez_fraction)
    stats = rolling_mean_std(a, w)
    size = len(stats)

    diagonals = np.arange(zone + 1, size, dtype=np.int64)
    total = len(diagonals)
    count = _count(s_size, total, "diagonals") if total else 0
    order = np.random.default_rng(seed).permutation(diagonals)[:count]

    vals = np.full(size, np.inf)
    idx = np.full(size, -1, dtype=np.int64)
    lvals, lidx = vals.copy(), idx.copy()
    rvals, ridx = vals.copy(), idx.copy()
    step = max(1, count // 100)
    for start in range(0, count, step):
        _kernels.scrimp_diagonals(a, w, stats.means, stats.stds, stats.flat, order[start : start + step],
                                  vals, idx, lvals, lidx, rvals, ridx)
        if progress:
            progress(min(count, start + step), count)

    full = count == total
    return MatrixProfile(
        values=vals,
        index=idx,
        window=w,
        exclusion_zone=zone,
        mode="scrimp",
        join_kind="self",
        coverage=count / total if total else 1.0,
        seed=seed,
        left_index=lidx if full else None,
        right_index=ridx if full else None,
    )
