from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _freeze(arr, dtype):
    if arr is None:
        return None
    out = np.array(arr, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class MatrixProfile:
    """Nearest-neighbour distances and positions for every window of a series.

    ``index`` points into the second series for an AB-join and into the same
    series for a self-join; ``-1`` marks windows without a neighbour.
    ``left_index``/``right_index`` are only present for full-coverage
    self-joins.
    """

    values: np.ndarray
    index: np.ndarray
    window: int
    exclusion_zone: int
    mode: str
    join_kind: str = "self"
    coverage: float = 1.0
    seed: int | None = None
    left_index: np.ndarray | None = None
    right_index: np.ndarray | None = None
    n_dims: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(self.values, np.float64))
        object.__setattr__(self, "index", _freeze(self.index, np.int64))
        object.__setattr__(self, "left_index", _freeze(self.left_index, np.int64))
        object.__setattr__(self, "right_index", _freeze(self.right_index, np.int64))

    def __len__(self):
        return len(self.values)

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def is_self_join(self) -> bool:
        return self.join_kind == "self"

    @property
    def complete(self) -> bool:
        return self.coverage >= 1.0

    @property
    def has_left_right(self) -> bool:
        return self.left_index is not None and self.right_index is not None


@dataclass(frozen=True, eq=False)
class MultiMatrixProfile:
    """Stack of k-dimensional profiles; row ``k`` aggregates ``k + 1`` dimensions.

    ``dim_order[k, :, i]`` is the dimension ranking at the pair chosen for
    row ``k`` and window ``i``: admissible dimensions first (forced ones
    leading, the rest by ascending distance), excluded ones last.
    """

    values: np.ndarray
    index: np.ndarray
    dim_order: np.ndarray
    window: int
    exclusion_zone: int
    must_dims: tuple = field(default_factory=tuple)
    exc_dims: tuple = field(default_factory=tuple)
    mode: str = "mstomp"
    join_kind: str = "self"
    coverage: float = 1.0
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(self.values, np.float64))
        object.__setattr__(self, "index", _freeze(self.index, np.int64))
        object.__setattr__(self, "dim_order", _freeze(self.dim_order, np.int64))
        object.__setattr__(self, "must_dims", tuple(int(d) for d in self.must_dims))
        object.__setattr__(self, "exc_dims", tuple(int(d) for d in self.exc_dims))

    @property
    def n_dims(self) -> int:
        return self.values.shape[0]

    @property
    def size(self) -> int:
        return self.values.shape[1]

    def __len__(self):
        return self.size

    def row(self, k: int, mode: str | None = None) -> MatrixProfile:
        """The ``(k + 1)``-dimensional profile as a plain :class:`MatrixProfile`."""
        return MatrixProfile(
            values=self.values[k],
            index=self.index[k],
            window=self.window,
            exclusion_zone=self.exclusion_zone,
            mode=mode or self.mode,
            join_kind="self",
            coverage=self.coverage,
            seed=self.seed,
        )

    def dims_at(self, k: int, i: int) -> list[int]:
        """Dimensions used by row ``k`` at window ``i``."""
        used = min(k + 1, self.n_dims - len(self.exc_dims))
        return [int(d) for d in self.dim_order[k, :used, i]]
