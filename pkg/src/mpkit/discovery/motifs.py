"""Motif pairs with their neighbours, and discords."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import apply_exclusion_zone, mass_distance_profile, raw_distance_profile, resolve_zone, zone_size
from ..errors import ParameterError, StaleProfileError, UnsupportedModeError
from ..profile.types import MatrixProfile, MultiMatrixProfile


@dataclass(frozen=True)
class MotifSet:
    pairs: list  # (anchor, pair, distance), ascending by distance
    neighbors: list  # one list of window indexes per pair
    window: int
    radius: float
    exclusion_zone: int
    dims: list | None = None  # per pair, dimensions used (multidimensional profiles)

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class DiscordSet:
    discords: list  # (index, distance), descending by distance
    exclusion_zone: int
    requested: int = 1
    truncated: bool = False

    def __len__(self):
        return len(self.discords)


def _require_complete(mp):
    if mp.coverage < 1.0:
        raise StaleProfileError(
            f"profile covers only {mp.coverage:.1%} of the join; rerun without an s_size limit"
        )


def _anchor_profile(mp, data, anchor, dims):
    w = mp.window
    if data is None:
        raise StaleProfileError("motif neighbours need the input data; keep the data with the profile")
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] - w + 1 != mp.size:
        raise ParameterError(f"data has {x.shape[0]} samples, which does not match a profile of size {mp.size}")
    if mp.mode == "simple":
        return raw_distance_profile(x[anchor : anchor + w], x)
    cols = dims if dims is not None else [0]
    if dims is None and x.shape[1] != 1:
        raise ParameterError("univariate profile given multidimensional data")
    total = np.zeros(mp.size)
    for k in cols:
        total += mass_distance_profile(x[anchor : anchor + w, k], x[:, k])
    return total / len(cols)


def find_motif(mp, data, n_motifs=3, radius=3.0, neighbor_exclusion_zone=None, n_neighbors=10, k=None) -> MotifSet:
    """Repeatedly take the lowest profile point as a motif pair and gather its neighbours.

    Neighbours are windows whose distance to the anchor is at most
    ``radius`` times the pair distance. Every reported window is separated
    from every other by more than ``neighbor_exclusion_zone`` (samples when
    >= 1, a fraction of the window otherwise; half the window by default).

    For a :class:`MultiMatrixProfile` pass ``k``, the number of dimensions;
    neighbour distances then average the dimensions chosen at the anchor.
    """
    dims_by_anchor = None
    if isinstance(mp, MultiMatrixProfile):
        if k is None:
            raise ParameterError("choose how many dimensions (k) to search a multidimensional profile with")
        if not 1 <= k <= mp.n_dims:
            raise ParameterError(f"k must be between 1 and {mp.n_dims}, got {k}")
        multi = mp
        mp = multi.row(k - 1)
        dims_by_anchor = lambda i: multi.dims_at(k - 1, i)  # noqa: E731
    if not mp.is_self_join:
        raise UnsupportedModeError("motif search needs a self-join profile")
    _require_complete(mp)
    if n_motifs < 1:
        raise ParameterError(f"n_motifs must be >= 1, got {n_motifs}")
    if radius < 0:
        raise ParameterError(f"radius must be non-negative, got {radius}")
    w = mp.window
    nz = zone_size(w, 0.5) if neighbor_exclusion_zone is None else resolve_zone(w, neighbor_exclusion_zone)

    size = mp.size
    working = np.array(mp.values, dtype=np.float64)
    taken = np.zeros(size, dtype=bool)
    pairs, neighbors, used_dims = [], [], []

    def block(pos):
        taken[max(0, pos - nz) : pos + nz + 1] = True

    while len(pairs) < n_motifs:
        working[taken] = np.inf
        anchor = int(np.argmin(working))
        dist = float(working[anchor])
        if not np.isfinite(dist):
            break
        working[anchor] = np.inf
        pair = int(mp.index[anchor])
        if pair < 0 or taken[pair] or abs(anchor - pair) <= nz:
            continue

        dims = dims_by_anchor(anchor) if dims_by_anchor else None
        dp = _anchor_profile(mp, data, anchor, dims)
        dp[taken] = np.inf
        apply_exclusion_zone(dp, anchor, nz, inplace=True)
        apply_exclusion_zone(dp, pair, nz, inplace=True)
        threshold = radius * dist
        found = []
        for cand in np.argsort(dp, kind="stable"):
            if len(found) >= n_neighbors:
                break
            if not np.isfinite(dp[cand]):
                continue  # masked by an earlier neighbour's zone
            if dp[cand] > threshold:
                break
            found.append(int(cand))
            apply_exclusion_zone(dp, int(cand), nz, inplace=True)

        pairs.append((anchor, pair, dist))
        neighbors.append(found)
        used_dims.append(dims)
        for pos in (anchor, pair, *found):
            block(pos)

    return MotifSet(
        pairs=pairs,
        neighbors=neighbors,
        window=w,
        radius=float(radius),
        exclusion_zone=nz,
        dims=used_dims if dims_by_anchor else None,
    )


def find_discord(mp: MatrixProfile, n_discords=1, exclusion_zone=None) -> DiscordSet:
    """Highest finite profile points, each masking a zone around itself."""
    _require_complete(mp)
    if n_discords < 1:
        raise ParameterError(f"n_discords must be >= 1, got {n_discords}")
    zone = mp.exclusion_zone if exclusion_zone is None else resolve_zone(mp.window, exclusion_zone)
    working = np.array(mp.values, dtype=np.float64)
    working[~np.isfinite(working)] = -np.inf
    discords = []
    while len(discords) < n_discords:
        i = int(np.argmax(working))
        if working[i] == -np.inf:
            break
        discords.append((i, float(working[i])))
        working[max(0, i - zone) : i + zone + 1] = -np.inf
    return DiscordSet(
        discords=discords,
        exclusion_zone=zone,
        requested=n_discords,
        truncated=len(discords) < n_discords,
    )
