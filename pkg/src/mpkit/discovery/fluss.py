"""Semantic segmentation from arc crossings of the profile index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError, StaleProfileError, UnsupportedModeError
from ..profile.types import MatrixProfile

DEFAULT_EXCLUSION_FACTOR = 5


@dataclass(frozen=True)
class FlussResult:
    arc_counts: np.ndarray
    cac: np.ndarray
    segments: list
    min_value: float
    min_index: int
    num_segments: int
    exclusion_factor: float
    truncated: bool = False


def fluss_arc_count(mp: MatrixProfile) -> np.ndarray:
    """Number of nearest-neighbour arcs strictly spanning each position.

    An arc joins ``j`` and ``index[j]``; it spans ``i`` when
    ``min(j, index[j]) < i < max(j, index[j])``.
    """
    if not mp.is_self_join:
        raise UnsupportedModeError("arc counts need a self-join profile")
    if mp.coverage < 1.0:
        raise StaleProfileError("arc counts need a complete profile")
    index = np.asarray(mp.index)
    return arc_counts_from_index(index)


def arc_counts_from_index(index) -> np.ndarray:
    index = np.asarray(index, dtype=np.int64)
    size = len(index)
    j = np.arange(size)
    lo = np.minimum(j, index)
    hi = np.maximum(j, index)
    ok = (index >= 0) & (hi - lo >= 2)  # shorter arcs span no position
    lo, hi = lo[ok], hi[ok]
    diff = np.zeros(size + 1, dtype=np.int64)
    np.add.at(diff, lo + 1, 1)
    np.add.at(diff, hi, -1)
    return np.cumsum(diff[:size])


def fluss_cac(arc_counts, w, edge_margin=None) -> np.ndarray:
    """Corrected arc curve: counts over the idealised parabola ``2 i (L - i) / L``, capped at 1.

    Positions closer than ``edge_margin`` (default ``w``) to either end are
    forced to 1.
    """
    ac = np.asarray(arc_counts, dtype=np.float64)
    size = len(ac)
    margin = int(w) if edge_margin is None else int(edge_margin)
    i = np.arange(size, dtype=np.float64)
    ideal = 2.0 * i * (size - i) / size
    with np.errstate(divide="ignore", invalid="ignore"):
        cac = np.where(ideal > 0, ac / ideal, 1.0)
    cac = np.minimum(cac, 1.0)
    cac[:margin] = 1.0
    cac[max(0, size - margin) :] = 1.0
    return cac


def fluss_extract(cac, num_segments, w, exclusion_factor=DEFAULT_EXCLUSION_FACTOR):
    """Pick up to ``num_segments`` boundaries at the lowest CAC points.

    Each pick masks ``exclusion_factor * w`` positions on both sides. Returns
    the boundaries and whether the search stopped early because only the
    ceiling value 1 remained.
    """
    if num_segments < 1:
        raise ParameterError(f"num_segments must be >= 1, got {num_segments}")
    working = np.array(cac, dtype=np.float64)
    half = int(round(exclusion_factor * w))
    segments = []
    while len(segments) < num_segments:
        i = int(np.argmin(working))
        if working[i] >= 1.0:
            break
        segments.append(i)
        working[max(0, i - half) : i + half + 1] = np.inf
    return segments, len(segments) < num_segments


def fluss(mp: MatrixProfile, num_segments=2, exclusion_factor=DEFAULT_EXCLUSION_FACTOR, edge_margin=None) -> FlussResult:
    arc_counts = fluss_arc_count(mp)
    cac = fluss_cac(arc_counts, mp.window, edge_margin)
    segments, truncated = fluss_extract(cac, num_segments, mp.window, exclusion_factor)
    i = int(np.argmin(cac))
    return FlussResult(
        arc_counts=arc_counts,
        cac=cac,
        segments=segments,
        min_value=float(cac[i]),
        min_index=i,
        num_segments=int(num_segments),
        exclusion_factor=float(exclusion_factor),
        truncated=truncated,
    )
