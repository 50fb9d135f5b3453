import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mpkit.core import (
    MIN_WINDOW,
    SlidingDotProduct,
    apply_exclusion_zone,
    mass_distance_profile,
    raw_distance_profile,
    resolve_zone,
    rolling_mean_std,
    sliding_dot_product,
    sliding_dot_product_direct,
    window_sqnorms,
    zone_size,
)
from mpkit.errors import ParameterError


def direct_znorm_profile(q, x):
    """Per-window z-normalise and take the Euclidean distance, one window at a time."""
    w = len(q)
    out = []
    qz = (q - q.mean()) / q.std()
    for i in range(len(x) - w + 1):
        win = x[i : i + w]
        out.append(np.sqrt(np.sum((qz - (win - win.mean()) / win.std()) ** 2)))
    return np.array(out)


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


# rolling_mean_std

def test_rolling_constant():
    st_ = rolling_mean_std(np.ones(5), 4)
    assert st_.means.tolist() == [1.0, 1.0]
    assert st_.stds.tolist() == [0.0, 0.0]
    assert st_.flat.all()


def test_rolling_alternating_population_std():
    st_ = rolling_mean_std(np.array([0, 1, 0, 1, 0, 1.0]), 4)
    assert st_.means.tolist() == [0.5, 0.5, 0.5]
    assert st_.stds.tolist() == [0.5, 0.5, 0.5]


def test_rolling_matches_direct_recomputation():
    x = np.random.default_rng(7).standard_normal(1024)
    st_ = rolling_mean_std(x, 64)
    win = np.lib.stride_tricks.sliding_window_view(x, 64)
    np.testing.assert_allclose(st_.means, win.mean(axis=1), atol=1e-10, rtol=0)
    np.testing.assert_allclose(st_.stds, win.std(axis=1), atol=1e-10, rtol=0)


def test_rolling_large_offset_stays_accurate():
    x = 1e8 + np.random.default_rng(1).standard_normal(2000)
    st_ = rolling_mean_std(x, 16)
    win = np.lib.stride_tricks.sliding_window_view(x, 16)
    np.testing.assert_allclose(st_.stds, win.std(axis=1), rtol=1e-6)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(8, 200), elements=finite), st.integers(4, 8))
def test_rolling_reversal(x, w):
    fwd = rolling_mean_std(x, w)
    rev = rolling_mean_std(x[::-1], w)
    np.testing.assert_allclose(rev.means, fwd.means[::-1], atol=1e-9)
    np.testing.assert_allclose(rev.stds, fwd.stds[::-1], atol=1e-7)
    assert (fwd.stds >= 0).all()
    assert len(fwd) == len(x) - w + 1


@pytest.mark.parametrize("w, n", [(3, 10), (11, 10), (0, 10)])
def test_window_bounds(w, n):
    with pytest.raises(ParameterError):
        rolling_mean_std(np.arange(n, dtype=float), w)


def test_min_window():
    assert MIN_WINDOW == 4


def test_rejects_nonfinite():
    with pytest.raises(ParameterError):
        rolling_mean_std(np.array([1, 2, np.nan, 4, 5.0]), 4)


# sliding dot products

def test_dot_selector_query():
    np.testing.assert_allclose(sliding_dot_product(np.array([1.0, 0.0]), np.array([3.0, 4.0, 5.0])), [3, 4], atol=1e-12)


def test_dot_zero_query():
    x = np.random.default_rng(0).standard_normal(100)
    np.testing.assert_allclose(sliding_dot_product(np.zeros(8), x), 0, atol=1e-12)


def test_dot_matches_direct():
    rng = np.random.default_rng(3)
    q, x = rng.standard_normal(32), rng.standard_normal(512)
    direct = np.array([q @ x[i : i + 32] for i in range(512 - 32 + 1)])
    np.testing.assert_allclose(sliding_dot_product(q, x), direct, atol=1e-9, rtol=0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4096), st.data())
def test_fft_equals_direct_path(n, data):
    w = data.draw(st.integers(1, n))
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    x, q = rng.uniform(-10, 10, n), rng.uniform(-10, 10, w)
    np.testing.assert_allclose(sliding_dot_product(q, x), sliding_dot_product_direct(q, x), atol=1e-9, rtol=0)


def test_cached_transform_reuse():
    rng = np.random.default_rng(4)
    x = rng.standard_normal(300)
    sdp = SlidingDotProduct(x, 20)
    for _ in range(3):
        q = rng.standard_normal(20)
        np.testing.assert_allclose(sdp(q), sliding_dot_product_direct(q, x), atol=1e-9)


# distance profiles

def test_mass_self_distance_zero_and_affine_invariance():
    x = np.random.default_rng(5).standard_normal(256)
    q = x[10:26]
    dp = mass_distance_profile(q, x)
    assert dp[10] == pytest.approx(0, abs=1e-12)
    np.testing.assert_allclose(mass_distance_profile(3.0 + 2.5 * q, x), dp, atol=1e-9)


def test_mass_matches_direct_znorm():
    x = np.random.default_rng(6).standard_normal(256)
    q = x[10:26]
    np.testing.assert_allclose(mass_distance_profile(q, x), direct_znorm_profile(q, x), atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(16, 300), st.integers(4, 16))
def test_mass_single_zero_nonnegative(seed, n, w):
    x = np.random.default_rng(seed).standard_normal(n)
    i = n // 3
    dp = mass_distance_profile(x[i : i + w], x)
    assert (dp >= 0).all()
    assert dp[i] == pytest.approx(0, abs=1e-12)
    assert np.argmin(dp) == i


def test_flat_conventions():
    x = np.concatenate([np.ones(8), np.arange(8.0)])
    dp = mass_distance_profile(np.full(4, 2.0), x)
    assert dp[0] == 0.0  # flat vs flat
    assert dp[-1] == pytest.approx(2.0)  # flat vs non-flat: sqrt(w)
    dp = mass_distance_profile(np.arange(4.0), x)
    assert dp[0] == pytest.approx(2.0)
    assert dp.max() <= 2 * np.sqrt(4) + 1e-12


def test_raw_profile_self_and_offset():
    rng = np.random.default_rng(8)
    x = rng.standard_normal((128, 2))
    w, j = 8, 30
    dp = raw_distance_profile(x[j : j + w], x)
    assert dp[j] == 0
    direct = [np.sqrt(np.sum((x[j : j + w] - x[i : i + w]) ** 2)) for i in range(128 - w + 1)]
    np.testing.assert_allclose(dp, direct, atol=1e-9)
    c = 0.7
    shifted = raw_distance_profile(x[j : j + w] + c, x)
    assert shifted[j] == pytest.approx(np.sqrt(2 * w * c * c))
    assert shifted[j] > dp[j]


def test_window_sqnorms():
    x = np.random.default_rng(9).standard_normal((50, 3))
    expected = [np.sum(x[i : i + 5] ** 2, axis=0) for i in range(46)]
    np.testing.assert_allclose(window_sqnorms(x, 5), expected, rtol=1e-12)


# exclusion zones

@pytest.mark.parametrize("w, frac, expected", [(50, 0.5, 25), (80, 0.5, 40), (50, 0.25, 13), (50, "1/4", 13), (7, "1/2", 4), (10, 0, 0)])
def test_zone_size(w, frac, expected):
    assert zone_size(w, frac) == expected


def test_zone_size_negative():
    with pytest.raises(ParameterError):
        zone_size(50, -0.1)


def test_resolve_zone_absolute_and_fraction():
    assert resolve_zone(80, 20) == 20
    assert resolve_zone(80, 0.5) == 40
    with pytest.raises(ParameterError):
        resolve_zone(80, 2.5)


def test_apply_zone():
    dp = np.zeros(10)
    out = apply_exclusion_zone(dp, 4, 0)
    assert np.isinf(out).sum() == 1 and np.isinf(out[4])
    assert not np.isinf(dp).any()
    assert np.isinf(apply_exclusion_zone(dp, 4, 10)).all()


def test_apply_zone_large_shape():
    out = apply_exclusion_zone(np.zeros(9922), 584, 40)
    assert np.isinf(out[544:625]).all()
    assert np.isfinite(out).sum() == 9841
