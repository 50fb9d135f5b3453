"""Matrix profile algorithms and result types."""

import math

import numpy as np

from ..errors import ParameterError, UnsupportedModeError
from .brute import brute_force_distance_matrix, brute_force_mp, znormalized_windows
from .multivariate import mstomp, simple
from .types import MatrixProfile, MultiMatrixProfile
from .univariate import DEFAULT_SEED, merge_min, scrimp, stamp, stomp

MODES = ("stomp", "stamp", "simple", "mstomp", "scrimp")

__all__ = [
    "MODES",
    "DEFAULT_SEED",
    "MatrixProfile",
    "MultiMatrixProfile",
    "brute_force_mp",
    "brute_force_distance_matrix",
    "compute",
    "merge_min",
    "mstomp",
    "scrimp",
    "simple",
    "stamp",
    "stomp",
    "znormalized_windows",
]


def _univariate(x, label):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ParameterError(f"{label} needs a univariate series, got shape {arr.shape}")
    return arr


def compute(*series, window_size, exclusion_zone=0.5, mode="stomp", s_size=math.inf,
            must_dim=None, exc_dim=None, n_workers=1, seed=DEFAULT_SEED, progress=None):
    """Compute a profile of one series (self-join) or two (AB-join) with the chosen algorithm."""
    if mode not in MODES:
        raise ParameterError(f"unknown mode {mode!r}; choose one of {', '.join(MODES)}")
    if len(series) not in (1, 2):
        raise ParameterError(f"expected one or two series, got {len(series)}")
    if (must_dim or exc_dim) and mode != "mstomp":
        raise ParameterError("must_dim and exc_dim apply to mode 'mstomp' only")
    ab = len(series) == 2

    if mode == "mstomp":
        if ab:
            raise UnsupportedModeError("mstomp supports self-joins only")
        return mstomp(series[0], window_size, exclusion_zone, must_dim or (), exc_dim or (), n_workers, progress)
    if mode == "simple":
        return simple(series[0], series[1] if ab else None, window_size, exclusion_zone, n_workers, progress)

    a = _univariate(series[0], mode)
    b = _univariate(series[1], mode) if ab else None
    if mode == "stomp":
        return stomp(a, b, window_size, exclusion_zone, n_workers, progress)
    if mode == "stamp":
        return stamp(a, b, window_size, exclusion_zone, s_size, n_workers, seed, progress)
    if ab:
        raise UnsupportedModeError("scrimp supports self-joins only")
    return scrimp(a, window_size, exclusion_zone, s_size, seed, progress)
