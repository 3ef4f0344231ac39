import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from quantpoly import GaussianKDE, PiecewisePolynomialDensity
from quantpoly.selection import GridConfig, fit_piecewise, grid_search


@pytest.fixture(scope="module")
def x(benchmark_samples):
    return benchmark_samples("weibull", 3000)


def test_params_round_trip():
    est = PiecewisePolynomialDensity(basis="lagrange", nb_list=[1, 3], nm_list=[3, 4])
    params = est.get_params()
    assert params["basis"] == "lagrange" and params["nb_list"] == [1, 3]
    c = clone(est)
    assert c.get_params() == params
    c.set_params(n_bins=5)
    assert c.n_bins == 5 and est.n_bins is None


def test_not_fitted():
    with pytest.raises(NotFittedError):
        PiecewisePolynomialDensity().pdf([1.0])


def test_direct_fit_matches_function(x):
    est = PiecewisePolynomialDensity(n_bins=4, n_moments=5).fit(x.reshape(-1, 1))
    ref = fit_piecewise(x, 4, 5)
    xs = np.linspace(0, 5, 50)
    np.testing.assert_array_equal(est.pdf(xs), ref.pdf(xs))
    np.testing.assert_array_equal(est.cdf(xs.reshape(-1, 1)), ref.cdf(xs))
    assert est.selection_ is None
    assert (est.n_bins_, est.n_moments_) == (4, 5)


def test_search_matches_grid_search(x):
    est = PiecewisePolynomialDensity(nb_list=[1, 4, 8], nm_list=[3, 5]).fit(x)
    ref = grid_search(x, GridConfig(nb_list=(1, 4, 8), nm_list=(3, 5)))
    assert (est.n_bins_, est.n_moments_) == (ref.chosen.n_bins, ref.chosen.n_moments)
    assert est.ks_ == ref.chosen.ks
    assert est.gof_ == ref.chosen.gof
    assert est.ks(x) == est.ks_


def test_fixed_bins_searches_moments(x):
    est = PiecewisePolynomialDensity(n_bins=6, nm_list=[3, 4, 5]).fit(x)
    assert est.n_bins_ == 6
    assert est.selection_.ks_matrix.shape == (1, 3)


def test_score_samples(x):
    est = PiecewisePolynomialDensity(n_bins=4, n_moments=3).fit(x)
    pts = np.array([x[300], x[1500], x[-1] + 10.0])
    s = est.score_samples(pts)
    np.testing.assert_allclose(s[:2], np.log(est.pdf(pts[:2])))
    assert s[2] == -np.inf
    assert est.score(pts[:2]) == pytest.approx(s[:2].sum())


def test_kde_estimator(x):
    est = GaussianKDE(bandwidth=0.1).fit(x[:500])
    assert est.cdf([1e6])[0] == 1.0
    assert clone(est).get_params() == {"bandwidth": 0.1}
    assert np.all(np.isfinite(est.score_samples(x[:5])))
