"""scikit-learn style estimators wrapping the fitting routines."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, DensityMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_sample
from .baselines import KdeModel, kde_cdf, kde_pdf
from .density import check_nonnegativity
from .exceptions import DegreesOfFreedomError
from .gof import gof_index, ks_statistic
from .selection import GridConfig, fit_piecewise, grid_search


def _as_points(X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 2:
        X = X[:, 0]
    return X


def _log(p):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, np.log(np.where(p > 0, p, 1.0)), -np.inf)


class _DensityEstimatorMixin(DensityMixin):

    def pdf(self, X):
        check_is_fitted(self)
        return self._pdf(_as_points(X))

    def cdf(self, X):
        check_is_fitted(self)
        return self._cdf(_as_points(X))

    def score_samples(self, X):
        """Log density at each point; ``-inf`` where the estimate is not positive."""
        return _log(self.pdf(X))

    def score(self, X, y=None):
        """Total log-likelihood of ``X``."""
        return float(np.sum(self.score_samples(X)))

    def ks(self, X):
        """K-S distance between the fitted CDF and the empirical CDF of ``X``."""
        check_is_fitted(self)
        return ks_statistic(check_sample(X), self._cdf)


class PiecewisePolynomialDensity(_DensityEstimatorMixin, BaseEstimator):
    """Quantile-binned, moment-matched piecewise polynomial density.

    With both ``n_bins`` and ``n_moments`` given the model is fitted directly.
    Otherwise the missing one(s) are chosen by K-S grid search over
    ``nb_list`` / ``nm_list`` among (nearly) non-negative fits.

    Parameters
    ----------
    basis : {"monomial", "lagrange"}
    n_bins, n_moments : int, optional
        Fix the bin count and/or the number of matched moments.
    nb_list, nm_list : sequence of int, optional
        Search ranges; default ``1..19`` and ``3..11``.
    feasibility_tol : float
        Allowed negativity relative to the peak density.
    prefer_strict : bool
        Rank exactly non-negative fits ahead of nearly non-negative ones.
    n_jobs : int
        Threads for the grid scan.

    Attributes
    ----------
    model_ : PiecewiseDensity
    selection_ : SelectionResult or None
        ``None`` when nothing was searched.
    n_bins_, n_moments_ : int
        Requested bin count and moment count of the fitted model; empty
        quantile bins merged away are visible as ``model_.n_bins``.
    ks_ : float
        K-S distance to the training sample.
    """

    def __init__(self, basis="monomial", n_bins=None, n_moments=None, nb_list=None,
                 nm_list=None, feasibility_tol=1e-3, prefer_strict=False,
                 samples_per_piece=64, n_jobs=1):
        self.basis = basis
        self.n_bins = n_bins
        self.n_moments = n_moments
        self.nb_list = nb_list
        self.nm_list = nm_list
        self.feasibility_tol = feasibility_tol
        self.prefer_strict = prefer_strict
        self.samples_per_piece = samples_per_piece
        self.n_jobs = n_jobs

    def _grid_config(self):
        nb = [self.n_bins] if self.n_bins is not None else (self.nb_list or range(1, 20))
        nm = [self.n_moments] if self.n_moments is not None else (self.nm_list or range(3, 12))
        return GridConfig(tuple(nb), tuple(nm), self.feasibility_tol, self.basis,
                          self.samples_per_piece, self.n_jobs, self.prefer_strict)

    def fit(self, X, y=None):
        sample = check_sample(X)
        config = self._grid_config()
        if self.n_bins is not None and self.n_moments is not None:
            self.model_ = fit_piecewise(sample, self.n_bins, self.n_moments,
                                        self.basis, assume_sorted=True)
            self.selection_ = None
            self.n_bins_, self.n_moments_ = self.n_bins, self.n_moments
            self.ks_ = ks_statistic(sample, self.model_.cdf)
        else:
            self.selection_ = grid_search(sample, config, assume_sorted=True)
            self.model_ = self.selection_.model
            chosen = self.selection_.chosen
            self.n_bins_, self.n_moments_ = chosen.n_bins, chosen.n_moments
            self.ks_ = chosen.ks
        self.feasibility_ = check_nonnegativity(
            self.model_, self.samples_per_piece, tolerance_factor=self.feasibility_tol)
        try:
            # requested bin count, as in the grid scan
            self.gof_ = gof_index(sample, self.model_.cdf, self.n_bins_, self.n_moments_)
        except DegreesOfFreedomError:
            self.gof_ = float("nan")
        return self

    def _pdf(self, x):
        return self.model_.pdf(x)

    def _cdf(self, x):
        return self.model_.cdf(x)


class GaussianKDE(_DensityEstimatorMixin, BaseEstimator):
    """Fixed-bandwidth Gaussian kernel density estimate."""

    def __init__(self, bandwidth=0.05):
        self.bandwidth = bandwidth

    def fit(self, X, y=None):
        self.model_ = KdeModel(check_sample(X), self.bandwidth)
        return self

    def _pdf(self, x):
        return kde_pdf(self.model_, x)

    def _cdf(self, x):
        return kde_cdf(self.model_, x)
