"""Numerical primitives shared by every matrix profile algorithm.

Everything here works on plain 64-bit numpy arrays. Windows are indexed by
their starting sample, so a series of length ``n`` has ``n - w + 1`` windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import fft as sp_fft

from .errors import ParameterError

MIN_WINDOW = 4

# A window whose std falls under FLAT_RTOL * max(1, |mean|) is treated as flat.
FLAT_RTOL = 1e-10
# squared distances below this fraction of their scale are recomputed directly
NEAR_ZERO = 1e-6


@dataclass(frozen=True)
class RollingStats:
    means: np.ndarray
    stds: np.ndarray
    window: int

    @property
    def flat(self) -> np.ndarray:
        return flat_mask(self.means, self.stds)

    def __len__(self) -> int:
        return len(self.means)


def flat_mask(means, stds):
    """Boolean mask of windows whose standard deviation is numerically zero."""
    return np.asarray(stds) <= FLAT_RTOL * np.maximum(1.0, np.abs(means))


def as_series(values, name="series") -> np.ndarray:
    """Coerce ``values`` to a finite 1-D float64 array of length >= 4."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.reshape(-1)
    if arr.ndim != 1:
        raise ParameterError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < MIN_WINDOW:
        raise ParameterError(f"{name} has {arr.size} samples; at least {MIN_WINDOW} are required")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ParameterError(f"{name} contains a non-finite value at position {bad}")
    return arr


def as_multi_series(values, name="series") -> np.ndarray:
    """Coerce ``values`` to a finite ``(n, d)`` float64 array.

    A 1-D input becomes a single column. A list of equal-length vectors is
    read as one vector per dimension; a 2-D array as one column per dimension.
    """
    if isinstance(values, (list, tuple)) and values and np.ndim(values[0]) == 1:
        lengths = {len(v) for v in values}
        if len(lengths) != 1:
            raise ParameterError(f"{name}: all dimensions must have the same length, got {sorted(lengths)}")
        arr = np.column_stack([np.asarray(v, dtype=np.float64) for v in values])
    else:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
    if arr.ndim != 2:
        raise ParameterError(f"{name} must be one- or two-dimensional, got shape {arr.shape}")
    if arr.shape[0] < MIN_WINDOW or arr.shape[1] < 1:
        raise ParameterError(f"{name} has shape {arr.shape}; need at least {MIN_WINDOW} rows and 1 column")
    if not np.all(np.isfinite(arr)):
        row, col = np.argwhere(~np.isfinite(arr))[0]
        raise ParameterError(f"{name} contains a non-finite value at row {row}, dimension {col}")
    return np.ascontiguousarray(arr)


def check_window(w, n: int) -> int:
    if isinstance(w, bool) or not isinstance(w, (int, np.integer)):
        if isinstance(w, Real) and float(w).is_integer():
            w = int(w)
        else:
            raise ParameterError(f"window size must be an integer, got {w!r}")
    w = int(w)
    if w < MIN_WINDOW:
        raise ParameterError(f"window size {w} is below the minimum of {MIN_WINDOW}")
    if w > n:
        raise ParameterError(f"window size {w} exceeds the series length {n}")
    return w


def rolling_mean_std(ts, w) -> RollingStats:
    """Per-window mean and population standard deviation in O(n).

    Uses cumulative sums of the globally centred series. Windows where the
    subtraction ``E[x^2] - E[x]^2`` lost too many digits are recomputed
    directly, which keeps the result within ~1e-12 of a two-pass computation.
    """
    x = np.asarray(ts, dtype=np.float64)
    if x.ndim != 1:
        raise ParameterError("rolling_mean_std expects a one-dimensional series")
    w = check_window(w, x.size)
    if not np.all(np.isfinite(x)):
        raise ParameterError(f"series contains a non-finite value at position {int(np.flatnonzero(~np.isfinite(x))[0])}")
    offset = x.mean()
    y = x - offset
    s1 = np.concatenate(([0.0], np.cumsum(y)))
    s2 = np.concatenate(([0.0], np.cumsum(y * y)))
    mean_c = (s1[w:] - s1[:-w]) / w
    ex2 = (s2[w:] - s2[:-w]) / w
    var = ex2 - mean_c * mean_c

    eps = np.finfo(np.float64).eps
    suspect = (var <= 1e-4 * ex2) | (var <= 1e3 * eps * (s2[-1] + 1.0) / w)
    if suspect.any():
        idx = np.flatnonzero(suspect)
        windows = sliding_window_view(y, w)[idx]
        mean_c[idx] = windows.mean(axis=1)
        var[idx] = windows.var(axis=1)

    return RollingStats(means=mean_c + offset, stds=np.sqrt(np.maximum(var, 0.0)), window=w)


def _fft_size(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


class SlidingDotProduct:
    """Precomputes the FFT of a series so many queries can be slid over it."""

    def __init__(self, ts, w: int):
        self.ts = np.asarray(ts, dtype=np.float64)
        self.w = int(w)
        self.n = self.ts.size
        self.size = _fft_size(self.n + self.w - 1)
        self._ts_fft = sp_fft.rfft(self.ts, self.size)

    def __call__(self, query) -> np.ndarray:
        q = np.asarray(query, dtype=np.float64)
        if q.size != self.w:
            raise ParameterError(f"query has length {q.size}, expected {self.w}")
        prod = sp_fft.irfft(self._ts_fft * sp_fft.rfft(q[::-1], self.size), self.size)
        return prod[self.w - 1 : self.n]


def sliding_dot_product(query, ts) -> np.ndarray:
    """``out[i] = sum_k query[k] * ts[i + k]`` via FFT convolution."""
    q = np.asarray(query, dtype=np.float64)
    t = np.asarray(ts, dtype=np.float64)
    if q.ndim != 1 or t.ndim != 1:
        raise ParameterError("sliding_dot_product expects one-dimensional inputs")
    if q.size < 1 or q.size > t.size:
        raise ParameterError(f"query length {q.size} must be between 1 and the series length {t.size}")
    return SlidingDotProduct(t, q.size)(q)


def sliding_dot_product_direct(query, ts) -> np.ndarray:
    """O(n*w) reference for :func:`sliding_dot_product`."""
    q = np.asarray(query, dtype=np.float64)
    t = np.asarray(ts, dtype=np.float64)
    if q.size > t.size:
        raise ParameterError(f"query length {q.size} exceeds the series length {t.size}")
    return sliding_window_view(t, q.size) @ q


def znorm_distance_from_dot(qt, w, mu_q, sig_q, mu_t, sig_t, flat_q, flat_t):
    """Convert sliding dot products to z-normalised Euclidean distances.

    Broadcasts over array arguments. Flat-vs-flat windows are at distance 0,
    flat-vs-varying at ``sqrt(w)``.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = (qt - w * mu_q * mu_t) / (w * sig_q * sig_t)
        d2 = 2.0 * w * (1.0 - corr)
    d2 = np.clip(d2, 0.0, 4.0 * w)
    dist = np.sqrt(d2)
    dist = np.where(flat_q | flat_t, np.sqrt(float(w)), dist)
    dist = np.where(flat_q & flat_t, 0.0, dist)
    return dist


def mass_distance_profile(query, ts, stats: RollingStats | None = None, query_mean=None, query_std=None):
    """Z-normalised Euclidean distance from ``query`` to every window of ``ts``.

    ``stats`` and the query moments are computed when omitted. The series is
    centred internally, which keeps the dot-product formula well conditioned
    for data sitting far from zero.
    """
    q = np.asarray(query, dtype=np.float64)
    t = np.asarray(ts, dtype=np.float64)
    w = check_window(q.size, t.size)
    if stats is None:
        stats = rolling_mean_std(t, w)
    if stats.window != w or len(stats) != t.size - w + 1:
        raise ParameterError("rolling statistics do not match the query length and series")
    if query_mean is None:
        query_mean = q.mean()
    if query_std is None:
        query_std = q.std()

    offset = t.mean()
    qt = sliding_dot_product(q - offset, t - offset)
    flat_q = bool(flat_mask(query_mean, query_std))
    dist = znorm_distance_from_dot(
        qt, w, query_mean - offset, query_std, stats.means - offset, stats.stds, flat_q, stats.flat
    )
    return refine_near_matches(dist, q, t, query_mean, query_std, flat_q, stats)


def refine_near_matches(dist, query, ts, query_mean, query_std, flat_q, stats: RollingStats):
    """Recompute very small distances window by window, in place.

    The dot-product form loses absolute accuracy as the distance approaches
    zero (``sqrt`` amplifies the cancellation), so near-exact matches are
    redone directly.
    """
    w = stats.window
    if flat_q:
        return dist
    near = np.flatnonzero((dist * dist < NEAR_ZERO * w) & ~stats.flat)
    if near.size:
        qz = (np.asarray(query, dtype=np.float64) - query_mean) / query_std
        win = sliding_window_view(np.asarray(ts, dtype=np.float64), w)[near]
        tz = (win - stats.means[near, None]) / stats.stds[near, None]
        dist[near] = np.sqrt(np.sum((tz - qz) ** 2, axis=1))
    return dist


def window_sqnorms(mts, w) -> np.ndarray:
    """Squared Euclidean norm of every window, one column per dimension."""
    x = as_multi_series(mts)
    w = check_window(w, x.shape[0])
    cols = []
    for k in range(x.shape[1]):
        win = sliding_window_view(x[:, k], w)
        cols.append(np.einsum("ij,ij->i", win, win))
    return np.stack(cols, axis=1)


def raw_distance_profile(query, mts, norms=None) -> np.ndarray:
    """Non-normalised Euclidean distance summed over all dimensions.

    ``query`` has shape ``(w, d)`` (or ``(w,)`` for one dimension) and ``mts``
    shape ``(n, d)``. ``norms`` may carry :func:`window_sqnorms` of ``mts``.
    """
    x = as_multi_series(mts)
    q = np.asarray(query, dtype=np.float64)
    if q.ndim == 1:
        q = q[:, None]
    if q.shape[1] != x.shape[1]:
        raise ParameterError(f"query has {q.shape[1]} dimensions, series has {x.shape[1]}")
    w = check_window(q.shape[0], x.shape[0])
    if norms is None:
        norms = window_sqnorms(x, w)
    total = np.zeros(x.shape[0] - w + 1)
    scale = np.zeros_like(total)
    for k in range(x.shape[1]):
        qt = sliding_dot_product(q[:, k], x[:, k])
        qq = np.dot(q[:, k], q[:, k])
        total += qq + norms[:, k] - 2.0 * qt
        scale += qq + norms[:, k]
    near = np.flatnonzero(total < NEAR_ZERO * scale)
    if near.size:
        win = sliding_window_view(x, w, axis=0)[near]  # (m, d, w)
        total[near] = np.sum((win - q.T) ** 2, axis=(1, 2))
    return np.sqrt(np.maximum(total, 0.0))


def _as_fraction(value) -> Fraction:
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"cannot parse {value!r} as a number or fraction") from exc
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**9)
    return Fraction(value)


def zone_size(w, fraction) -> int:
    """Resolve an exclusion-zone fraction of the window to a sample count.

    Rounds half up, so a 50-sample window with fraction 1/4 gives 13.
    """
    frac = _as_fraction(fraction)
    if frac < 0:
        raise ParameterError(f"exclusion zone fraction must be non-negative, got {fraction}")
    return math.floor(int(w) * frac + Fraction(1, 2))


def resolve_zone(w, value) -> int:
    """Zone given either as an absolute sample count (>= 1) or a fraction of ``w`` (< 1)."""
    frac = _as_fraction(value)
    if frac < 0:
        raise ParameterError(f"exclusion zone must be non-negative, got {value}")
    if frac >= 1:
        if frac.denominator != 1:
            raise ParameterError(f"absolute exclusion zone must be an integer, got {value}")
        return int(frac)
    return zone_size(w, frac)


def apply_exclusion_zone(dp, center: int, zone: int, inplace: bool = False) -> np.ndarray:
    """Set entries with ``|i - center| <= zone`` to +inf."""
    out = dp if inplace else np.array(dp, dtype=np.float64, copy=True)
    lo = max(0, int(center) - int(zone))
    hi = min(len(out), int(center) + int(zone) + 1)
    if lo < hi:
        out[lo:hi] = np.inf
    return out
