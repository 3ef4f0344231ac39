"""Empirical CDF, Kolmogorov-Smirnov distance and the GoF index."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_points
from .exceptions import DegreesOfFreedomError, InsufficientDataError, InvalidModelError

_CDF_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """Right-continuous step function ``#(points <= x) / N``."""

    sample: np.ndarray

    def __post_init__(self):
        s = np.sort(np.asarray(self.sample, dtype=np.float64), kind="stable")
        if s.size == 0:
            raise InsufficientDataError("empty sample")
        object.__setattr__(self, "sample", s)

    def __call__(self, x):
        x = check_points(x)
        out = np.searchsorted(self.sample, x, side="right") / self.sample.size
        return out if np.ndim(out) else float(out)

    def at_sample(self):
        """ECDF at each sorted sample point, ties resolved to the right limit."""
        return np.searchsorted(self.sample, self.sample, side="right") / self.sample.size


def model_cdf_values(sample, model_cdf):
    """``model_cdf(sample)`` checked to be finite and within ``[0, 1]`` up to round-off."""
    f = np.asarray(model_cdf(sample), dtype=np.float64)
    if f.shape != sample.shape:
        raise InvalidModelError("model CDF must return one value per point")
    if not np.all(np.isfinite(f)) or f.min() < -_CDF_SLACK or f.max() > 1 + _CDF_SLACK:
        raise InvalidModelError(
            f"model CDF left [0, 1]: range [{np.nanmin(f)}, {np.nanmax(f)}]")
    return f


def ks_statistic(sample, model_cdf):
    """Exact ``sup_x |F_emp(x) - F(x)|`` for a continuous model CDF.

    The ECDF only jumps at sample points, so comparing the model against both
    sides of every step gives the supremum exactly.

    Parameters
    ----------
    sample : array-like
        Sorted sample.
    model_cdf : callable
        Vectorised CDF of the model.
    """
    sample = np.asarray(sample, dtype=np.float64)
    if sample.size == 0:
        raise InsufficientDataError("empty sample")
    return ks_from_values(model_cdf_values(sample, model_cdf))


def ks_from_values(f):
    """K-S distance given the model CDF already evaluated on the sorted sample."""
    n = f.size
    i = np.arange(1, n + 1)
    upper = np.abs(f - i / n)
    lower = np.abs(f - (i - 1) / n)
    return float(max(upper.max(), lower.max()))


def st_error(sample, model_cdf, n_bins, n_moments):
    """Root mean squared ECDF gap with ``N - n_bins * n_moments`` degrees of freedom."""
    sample = np.asarray(sample, dtype=np.float64)
    _check_dof(sample.size, n_bins, n_moments)
    return _st_error(sample, model_cdf_values(sample, model_cdf), n_bins * n_moments)


def _check_dof(n, n_bins, n_moments):
    if n - n_bins * n_moments <= 0:
        raise DegreesOfFreedomError(
            f"N={n} <= N_B*N_M={n_bins * n_moments}; standard error undefined")


def _st_error(sample, f, n_params):
    emp = np.searchsorted(sample, sample, side="right") / sample.size
    d = emp - f
    return math.sqrt(math.fsum((d * d).tolist()) / (sample.size - n_params))


def gof_index(sample, model_cdf, n_bins, n_moments):
    """``(mean F - st_error) / mean F`` with ``mean F`` taken over the sample.

    Raises
    ------
    DegreesOfFreedomError
        When ``N <= n_bins * n_moments``.
    """
    sample = np.asarray(sample, dtype=np.float64)
    _check_dof(sample.size, n_bins, n_moments)
    return gof_from_values(sample, model_cdf_values(sample, model_cdf), n_bins, n_moments)


def gof_from_values(sample, f, n_bins, n_moments):
    _check_dof(sample.size, n_bins, n_moments)
    se = _st_error(sample, f, n_bins * n_moments)
    mean_f = math.fsum(f.tolist()) / f.size
    if mean_f <= 0:
        raise InvalidModelError("model CDF is zero on the whole sample")
    return (mean_f - se) / mean_f
