"""Direct O(n^2 w) similarity join, used as the correctness reference."""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.spatial.distance import cdist

from ..core import FLAT_RTOL, as_series, check_window, zone_size
from .types import MatrixProfile

_ROWS = 256


def znormalized_windows(ts, w):
    """Every window z-normalised on its own; flat windows map to the zero vector."""
    win = sliding_window_view(np.asarray(ts, dtype=np.float64), w)
    mu = win.mean(axis=1)
    sd = win.std(axis=1)
    flat = sd <= FLAT_RTOL * np.maximum(1.0, np.abs(mu))
    z = (win - mu[:, None]) / np.where(flat, 1.0, sd)[:, None]
    z[flat] = 0.0
    return z


def brute_force_distance_matrix(ts_a, ts_b, w):
    """Full ``(La, Lb)`` matrix of z-normalised Euclidean distances."""
    return cdist(znormalized_windows(ts_a, w), znormalized_windows(ts_b, w))


def brute_force_mp(ts_a, ts_b=None, w=None, ez_fraction=0.5) -> MatrixProfile:
    a = as_series(ts_a, "ts_a")
    self_join = ts_b is None
    b = a if self_join else as_series(ts_b, "ts_b")
    w = check_window(w, min(a.size, b.size))
    zone = zone_size(w, ez_fraction) if self_join else 0

    za = znormalized_windows(a, w)
    zb = za if self_join else znormalized_windows(b, w)
    la, lb = len(za), len(zb)
    values = np.full(la, np.inf)
    index = np.full(la, -1, dtype=np.int64)
    left = np.full(la, -1, dtype=np.int64)
    right = np.full(la, -1, dtype=np.int64)
    cols = np.arange(lb)

    for start in range(0, la, _ROWS):
        stop = min(la, start + _ROWS)
        block = cdist(za[start:stop], zb)
        for r, i in enumerate(range(start, stop)):
            row = block[r]
            if self_join:
                row[np.abs(cols - i) <= zone] = np.inf
            j = int(np.argmin(row))
            if np.isfinite(row[j]):
                values[i] = row[j]
                index[i] = j
            if self_join:
                lo, hi = row[:i], row[i + 1 :]
                if lo.size and np.isfinite(lo.min()):
                    left[i] = int(np.argmin(lo))
                if hi.size and np.isfinite(hi.min()):
                    right[i] = i + 1 + int(np.argmin(hi))

    return MatrixProfile(
        values=values,
        index=index,
        window=w,
        exclusion_zone=zone,
        mode="brute",
        join_kind="self" if self_join else "ab",
        left_index=left if self_join else None,
        right_index=right if self_join else None,
    )
