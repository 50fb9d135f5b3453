import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpkit.core import mass_distance_profile, raw_distance_profile, zone_size
from mpkit.errors import ParameterError, UnsupportedModeError
from mpkit.io import gen_random_walk
from mpkit.profile import (
    MatrixProfile,
    brute_force_distance_matrix,
    brute_force_mp,
    compute,
    merge_min,
    mstomp,
    scrimp,
    simple,
    stamp,
    stomp,
)

ATOL = 1e-8


@pytest.fixture(scope="module")
def walk512():
    return gen_random_walk(512, seed=11)


@pytest.fixture(scope="module")
def oracle512(walk512):
    return brute_force_mp(walk512, None, 32)


def assert_attains(mp, x, y=None):
    """Every reported index sits at the reported distance."""
    dm = brute_force_distance_matrix(x, x if y is None else y, mp.window)
    ok = mp.index >= 0
    got = dm[np.flatnonzero(ok), mp.index[ok]]
    np.testing.assert_allclose(got, mp.values[ok], atol=ATOL, rtol=0)


# brute force oracle

def test_brute_identical_sine_periods():
    t = np.arange(200)
    x = np.sin(2 * np.pi * t / 100)
    mp = brute_force_mp(x, None, 50)
    assert mp.values.min() == pytest.approx(0, abs=1e-9)
    i = int(np.argmin(mp.values))
    assert abs(int(mp.index[i]) - i) == 100


def test_brute_ab_identity():
    x = np.random.default_rng(1).standard_normal(300)
    mp = brute_force_mp(x, x, 16)
    np.testing.assert_allclose(mp.values, 0, atol=1e-9)
    assert (mp.index == np.arange(mp.size)).all()
    assert mp.exclusion_zone == 0


# exact algorithms against the oracle

@pytest.mark.parametrize("algo", ["stomp", "stamp", "scrimp"])
def test_oracle_fixture(algo, walk512, oracle512):
    mp = compute(walk512, window_size=32, mode=algo)
    np.testing.assert_allclose(mp.values, oracle512.values, atol=ATOL, rtol=0)
    assert_attains(mp, walk512)
    assert mp.complete and mp.has_left_right


def test_stomp_left_right_structure(walk512):
    mp = stomp(walk512, None, 32)
    pos = np.arange(mp.size)
    left, right = mp.left_index, mp.right_index
    assert (left[left >= 0] < pos[left >= 0]).all()
    assert (right[right >= 0] > pos[right >= 0]).all()
    dm = brute_force_distance_matrix(walk512, walk512, 32)
    both = (left >= 0) & (right >= 0)
    lv = dm[pos[both], left[both]]
    rv = dm[pos[both], right[both]]
    np.testing.assert_allclose(np.minimum(lv, rv), mp.values[both], atol=ATOL)


@pytest.mark.parametrize("n, w, ez, size, zone", [(10001, 80, 0.5, 9922, 40), (904, 50, 0.25, 855, 13)])
def test_reference_shapes(n, w, ez, size, zone):
    mp = stomp(gen_random_walk(n, 3), None, w, ez)
    assert (mp.size, mp.exclusion_zone) == (size, zone)


def test_constant_series_flat_convention():
    mp = stomp(np.full(64, 2.5), None, 8)
    assert (mp.values == 0).all()
    zone = mp.exclusion_zone
    # every candidate ties at 0, so the lowest admissible position wins
    expected = [0 if i - zone - 1 >= 0 else i + zone + 1 for i in range(mp.size)]
    assert mp.index.tolist() == expected


@pytest.mark.parametrize("algo", ["stomp", "stamp"])
def test_ab_join_with_itself(algo):
    x = np.random.default_rng(2).standard_normal(400)
    mp = compute(x, x, window_size=20, mode=algo)
    np.testing.assert_allclose(mp.values, 0, atol=1e-12)
    assert (mp.index == np.arange(mp.size)).all()
    assert mp.join_kind == "ab" and mp.left_index is None


def test_ab_join_matches_oracle():
    rng = np.random.default_rng(3)
    a, b = np.cumsum(rng.standard_normal(300)), np.cumsum(rng.standard_normal(250))
    oracle = brute_force_mp(a, b, 24)
    for mode in ("stomp", "stamp"):
        mp = compute(a, b, window_size=24, mode=mode)
        np.testing.assert_allclose(mp.values, oracle.values, atol=ATOL)
        assert_attains(mp, a, b)


# anytime behaviour

def test_stamp_single_profile_upper_bound(walk512, oracle512):
    mp = stamp(walk512, None, 32, s_size=1, seed=4)
    assert mp.coverage == pytest.approx(1 / oracle512.size)
    assert (mp.values >= oracle512.values - ATOL).all()
    assert mp.left_index is None and mp.right_index is None
    j = int(np.random.default_rng(4).permutation(oracle512.size)[0])
    dp = mass_distance_profile(walk512[j : j + 32], walk512)
    dp[max(0, j - 16) : j + 17] = np.inf
    np.testing.assert_allclose(mp.values, dp, atol=ATOL)


def test_scrimp_partial_is_upper_bound_and_exact_on_visited(walk512, oracle512):
    total = oracle512.size - oracle512.exclusion_zone - 1
    count = total // 10
    mp = scrimp(walk512, 32, s_size=count, seed=9)
    assert mp.coverage == pytest.approx(count / total)
    assert (mp.values >= oracle512.values - ATOL).all()
    visited = set(np.random.default_rng(9).permutation(np.arange(oracle512.exclusion_zone + 1, oracle512.size))[:count].tolist())
    hit = np.array([abs(i - j) in visited for i, j in enumerate(oracle512.index)])
    assert hit.any()
    np.testing.assert_allclose(mp.values[hit], oracle512.values[hit], atol=ATOL)


@pytest.mark.parametrize("algo", ["stamp", "scrimp"])
def test_anytime_monotone(algo, walk512):
    prev = None
    for s in (5, 40, 200, math.inf):
        mp = compute(walk512, window_size=32, mode=algo, s_size=s, seed=1)
        if prev is not None:
            assert (mp.values <= prev).all()
        prev = mp.values


def test_s_size_validation(walk512):
    with pytest.raises(ParameterError):
        stamp(walk512, None, 32, s_size=0)


# merge_min

def _empty(size, w=8):
    return MatrixProfile(values=np.full(size, np.inf), index=np.full(size, -1), window=w, exclusion_zone=4, mode="stamp")


def test_merge_all_inf_keeps_accumulator():
    acc = merge_min(_empty(10), np.arange(10.0), 3)
    out = merge_min(acc, np.full(10, np.inf), 7)
    assert out.values.tolist() == acc.values.tolist()
    assert out.index.tolist() == acc.index.tolist()


def test_merge_fresh_takes_dp():
    dp = np.array([1.0, np.inf, 2.0])
    out = merge_min(_empty(3), dp, 5)
    assert out.values.tolist() == dp.tolist()
    assert out.index.tolist() == [5, -1, 5]


def test_merge_ties_keep_incumbent():
    acc = merge_min(_empty(3), np.ones(3), 1)
    assert merge_min(acc, np.ones(3), 2).index.tolist() == [1, 1, 1]


def test_merge_any_order_matches_oracle(walk512, oracle512):
    w, zone = 32, oracle512.exclusion_zone
    acc = _empty(oracle512.size, w)
    for j in np.random.default_rng(0).permutation(oracle512.size):
        dp = mass_distance_profile(walk512[j : j + w], walk512)
        dp[max(0, j - zone) : j + zone + 1] = np.inf
        acc = merge_min(acc, dp, int(j))
    np.testing.assert_allclose(acc.values, oracle512.values, atol=ATOL)


# multidimensional

def test_mstomp_single_dim_equals_stomp(walk512):
    m = mstomp(walk512, 32)
    s = stomp(walk512, None, 32)
    np.testing.assert_allclose(m.values[0], s.values, atol=ATOL)
    assert m.values.shape == (1, s.size)


def test_mstomp_rows_monotone_and_mean_of_smallest():
    x = np.cumsum(np.random.default_rng(5).standard_normal((300, 3)), axis=0)
    w = 16
    m = mstomp(x, w)
    assert (np.diff(m.values, axis=0) >= 0).all()
    # column 0 row k is the min over j of the mean of the k+1 smallest per-dim distances
    per_dim = np.stack([brute_force_distance_matrix(x[:, k], x[:, k], w)[0] for k in range(3)])
    per_dim[:, : m.exclusion_zone + 1] = np.inf
    ranked = np.sort(per_dim, axis=0)
    for k in range(3):
        agg = ranked[: k + 1].mean(axis=0)
        assert m.values[k, 0] == pytest.approx(agg.min(), abs=ATOL)


def test_mstomp_excluded_dim_collapses():
    x = np.cumsum(np.random.default_rng(6).standard_normal((250, 2)), axis=0)
    m = mstomp(x, 16, exc_dims=[1])
    ref = stomp(x[:, 0], None, 16)
    for k in range(2):
        np.testing.assert_allclose(m.values[k], ref.values, atol=ATOL)
    assert (m.dim_order[0, 0] == 0).all()


def test_mstomp_must_dim_leads():
    x = np.cumsum(np.random.default_rng(7).standard_normal((250, 3)), axis=0)
    m = mstomp(x, 16, must_dims=[2])
    assert (m.dim_order[:, 0, :] == 2).all()
    assert m.dims_at(0, 5) == [2]


@pytest.mark.parametrize("kw", [{"must_dims": [0], "exc_dims": [0]}, {"exc_dims": [0, 1]}, {"must_dims": [5]}])
def test_mstomp_bad_dims(kw):
    x = np.random.default_rng(0).standard_normal((100, 2))
    with pytest.raises(ParameterError):
        mstomp(x, 8, **kw)


def test_simple_ab_identity_exact():
    x = np.random.default_rng(8).standard_normal((500, 3))
    mp = simple(x, x, 20)
    assert (mp.values == 0).all()
    assert (mp.index == np.arange(mp.size)).all()


def test_simple_matches_direct_oracle():
    x = np.random.default_rng(9).standard_normal((150, 2))
    w = 10
    mp = simple(x, None, w)
    win = np.lib.stride_tricks.sliding_window_view(x, w, axis=0).reshape(150 - w + 1, -1)
    dm = np.sqrt(((win[:, None, :] - win[None, :, :]) ** 2).sum(axis=2))
    for i in range(len(dm)):
        dm[i, max(0, i - mp.exclusion_zone) : i + mp.exclusion_zone + 1] = np.inf
    np.testing.assert_allclose(mp.values, dm.min(axis=1), atol=1e-9)


def test_simple_skips_normalisation():
    # every window of a w-periodic zero-mean unit-variance signal is already z-normalised
    w = 25
    t = np.arange(w)
    base = np.sin(2 * np.pi * t / w) + 0.5 * np.sin(4 * np.pi * t / w + 1)
    base = (base - base.mean()) / base.std()
    x = np.tile(base, 12)
    x[200:230] *= 3.0
    win = np.lib.stride_tricks.sliding_window_view(x, w)
    normal = (np.abs(win.std(axis=1) - 1) < 1e-9) & (np.abs(win.mean(axis=1)) < 1e-9)
    assert normal.sum() > 100
    s = simple(x, None, w)
    z = stomp(x, None, w)
    np.testing.assert_allclose(s.values[normal], z.values[normal], atol=1e-6)
    assert np.abs(s.values[~normal] - z.values[~normal]).max() > 0.1
    # shifted copies sit at non-zero distances, which agree too
    q = x[3 : 3 + w]
    raw = raw_distance_profile(q, x)
    zn = mass_distance_profile(q, x)
    assert raw[normal].max() > 1.0
    np.testing.assert_allclose(raw[normal], zn[normal], atol=1e-6)
    assert np.abs(raw[~normal] - zn[~normal]).max() > 0.1


def test_simple_dimension_mismatch():
    with pytest.raises(ParameterError):
        simple(np.zeros((50, 2)), np.zeros((50, 3)), 8)


# determinism across workers

@pytest.mark.parametrize("mode", ["stomp", "stamp", "mstomp", "simple"])
def test_worker_determinism(mode):
    x = gen_random_walk(2600, 5)
    data = np.column_stack([x, x[::-1]]) if mode in ("mstomp", "simple") else x
    ref = compute(data, window_size=20, mode=mode, n_workers=1, seed=3)
    for nw in (2, 4, 8):
        mp = compute(data, window_size=20, mode=mode, n_workers=nw, seed=3)
        assert mp.values.tobytes() == ref.values.tobytes()
        assert mp.index.tobytes() == ref.index.tobytes()


# dispatcher

@pytest.mark.parametrize("args, kw, exc", [
    (2, {"mode": "scrimp"}, UnsupportedModeError),
    (2, {"mode": "mstomp"}, UnsupportedModeError),
    (1, {"mode": "nope"}, ParameterError),
    (1, {"mode": "stomp", "must_dim": [0]}, ParameterError),
    (1, {"mode": "stomp", "n_workers": 0}, ParameterError),
    (3, {"mode": "stomp"}, ParameterError),
])
def test_compute_rejects(args, kw, exc):
    x = gen_random_walk(100, 0)
    with pytest.raises(exc):
        compute(*([x] * args), window_size=10, **kw)


# properties

@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(40, 300), st.sampled_from([0, 0.25, 0.5]), st.data())
def test_size_and_zone_laws(seed, n, ez, data):
    w = data.draw(st.integers(4, n // 4))
    x = gen_random_walk(n, seed)
    mode = data.draw(st.sampled_from(["stomp", "stamp", "scrimp"]))
    mp = compute(x, window_size=w, exclusion_zone=ez, mode=mode, seed=seed)
    assert mp.size == n - w + 1
    assert mp.exclusion_zone == zone_size(w, ez)
    fin = np.isfinite(mp.values)
    assert (np.abs(mp.index[fin] - np.flatnonzero(fin)) > mp.exclusion_zone).all()
    assert (mp.values[fin] >= 0).all()
    assert (mp.index[~fin] == -1).all()


def test_profile_is_read_only(walk512):
    mp = stomp(walk512, None, 32)
    with pytest.raises(ValueError):
        mp.values[0] = 1.0
