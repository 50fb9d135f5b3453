"""Time series chains from the left and right profile indexes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import StaleProfileError
from ..profile.types import MatrixProfile

MIN_CHAIN = 3


@dataclass(frozen=True)
class ChainSet:
    chains: list  # each a strictly increasing list of window indexes
    best_chain: list

    @property
    def count(self) -> int:
        return len(self.chains)

    def __len__(self):
        return len(self.chains)


def _linked(left, right, a, b):
    return b >= 0 and right[a] == b and left[b] == a


def find_chains(mp: MatrixProfile, min_length=MIN_CHAIN) -> ChainSet:
    """All maximal chains of bidirectionally linked windows with at least ``min_length`` members.

    ``a -> b`` is a link when ``b`` is the right nearest neighbour of ``a``
    and ``a`` the left nearest neighbour of ``b``. The best chain is the
    longest; ties go to the earliest start.
    """
    if not mp.has_left_right or mp.coverage < 1.0:
        raise StaleProfileError("chains need left and right indexes from a complete self-join profile")
    left = np.asarray(mp.left_index)
    right = np.asarray(mp.right_index)
    size = len(left)

    has_pred = np.zeros(size, dtype=bool)
    for b in range(size):
        a = left[b]
        if a >= 0 and right[a] == b:
            has_pred[b] = True

    chains = []
    for start in np.flatnonzero(~has_pred):
        chain = [int(start)]
        cur = int(start)
        while _linked(left, right, cur, int(right[cur])):
            cur = int(right[cur])
            chain.append(cur)
        if len(chain) >= min_length:
            chains.append(chain)

    best = []
    for chain in chains:
        if len(chain) > len(best):
            best = chain
    return ChainSet(chains=chains, best_chain=best)
