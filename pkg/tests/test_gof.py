import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantpoly.exceptions import DegreesOfFreedomError, InsufficientDataError, InvalidModelError
from quantpoly.gof import EmpiricalCdf, gof_index, ks_statistic, st_error
from quantpoly.sampling import BENCHMARKS, true_cdf


def uniform_cdf(x):
    return np.clip(x, 0.0, 1.0)


def test_two_point_example():
    assert ks_statistic(np.array([0.25, 0.75]), uniform_cdf) == pytest.approx(0.25, abs=1e-15)


def test_self_comparison():
    x = np.sort(np.random.default_rng(0).uniform(size=100))
    ecdf = EmpiricalCdf(x)
    # at the steps the ECDF matches itself exactly ...
    np.testing.assert_array_equal(ecdf(x), np.arange(1, 101) / 100)
    # ... and the exact two-sided statistic sees only the jump below each step
    assert ks_statistic(x, ecdf) == pytest.approx(1 / 100, abs=1e-15)
    mid = lambda t: (np.searchsorted(x, t, side="right") - 0.5) / x.size
    assert ks_statistic(x, mid) == pytest.approx(0.5 / x.size, abs=1e-15)


def test_ties_in_ecdf():
    ecdf = EmpiricalCdf(np.array([1.0, 1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(ecdf(np.array([0.5, 1.0, 1.5, 3.0])), [0, 0.5, 0.5, 1.0])
    np.testing.assert_array_equal(ecdf.at_sample(), [0.5, 0.5, 0.75, 1.0])


def _dense_grid_ks(x, cdf, points=10**6):
    grid = np.linspace(x[0] - 1e-9, x[-1] + 1e-9, points)
    grid = np.concatenate((grid, x, np.nextafter(x, -np.inf)))
    return np.max(np.abs(np.searchsorted(x, grid, side="right") / x.size - cdf(grid)))


@pytest.mark.parametrize("name", ["normal", "trimodal-weibull"])
def test_matches_dense_grid(name):
    spec = BENCHMARKS[name]
    x = np.sort(np.random.default_rng(4).standard_normal(3000) * spec.scale + 1.0) \
        if name == "normal" else np.sort(np.random.default_rng(4).uniform(0.01, 10, 3000))
    cdf = lambda t: true_cdf(spec, t)
    exact = ks_statistic(x, cdf)
    brute = _dense_grid_ks(x, cdf)
    assert abs(exact - brute) <= 1 / (2 * x.size) + 1e-9
    # sampling both step sides at the data makes the brute force exact too
    assert exact == pytest.approx(brute, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 200), st.floats(-50, 50), st.floats(0.01, 100), st.integers(0, 2**32 - 1))
def test_affine_invariance(n, shift, scale, seed):
    x = np.sort(np.random.default_rng(seed).normal(size=n))
    cdf = lambda t: true_cdf(BENCHMARKS["normal"], t)
    moved = lambda t: cdf((t - shift) / scale)
    a = ks_statistic(x, cdf)
    b = ks_statistic(x * scale + shift, moved)
    assert a == pytest.approx(b, abs=1e-12)


def test_invalid_model():
    x = np.array([0.1, 0.5])
    with pytest.raises(InvalidModelError):
        ks_statistic(x, lambda t: t * 3)
    with pytest.raises(InvalidModelError):
        ks_statistic(x, lambda t: t - 0.2)
    with pytest.raises(InsufficientDataError):
        ks_statistic(np.array([]), uniform_cdf)
    # small round-off outside [0, 1] is tolerated
    assert ks_statistic(x, lambda t: np.full_like(t, 1 + 1e-12)) == pytest.approx(1.0)


def test_st_error_brute_force():
    x = np.array([0.1, 0.2, 0.4, 0.7, 0.9])
    f = lambda t: t ** 2
    n_bins, n_moments = 1, 2
    total = 0.0
    for i, xi in enumerate(x):
        emp = sum(1 for v in x if v <= xi) / len(x)
        total += (emp - xi ** 2) ** 2
    se = math.sqrt(total / (len(x) - n_bins * n_moments))
    assert st_error(x, f, n_bins, n_moments) == pytest.approx(se, abs=1e-12)
    mean_f = sum(xi ** 2 for xi in x) / len(x)
    assert gof_index(x, f, n_bins, n_moments) == pytest.approx((mean_f - se) / mean_f, abs=1e-12)


def test_perfect_fit_gives_one():
    x = np.array([0.2, 0.4, 0.6, 0.8])
    step = lambda t: np.searchsorted(x, t, side="right") / x.size
    assert st_error(x, step, 1, 1) == 0.0
    assert gof_index(x, step, 1, 1) == 1.0


def test_degrees_of_freedom():
    x = np.linspace(0.1, 0.9, 6)
    with pytest.raises(DegreesOfFreedomError):
        gof_index(x, uniform_cdf, 2, 3)
    with pytest.raises(DegreesOfFreedomError):
        st_error(x, uniform_cdf, 1, 7)
    assert np.isfinite(gof_index(x, uniform_cdf, 1, 5))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 0.02), st.floats(0.0, 0.02))
def test_gof_bounded_and_decreasing(e1, e2):
    x = np.linspace(0.05, 0.95, 40)
    lo, hi = sorted((e1, e2))
    # alternating perturbations of the ECDF raise st_error with the mean held fixed
    emp = np.arange(1, 41) / 40
    signs = np.where(np.arange(40) % 2 == 0, 1.0, -1.0)
    g = lambda e: gof_index(x, lambda t: np.interp(t, x, np.clip(emp + e * signs, 0, 1)), 1, 3)
    assert g(lo) <= 1.0 and g(hi) <= 1.0
    if hi - lo > 1e-9:
        assert g(hi) < g(lo)
