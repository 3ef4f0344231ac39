"""Piecewise moment-matched polynomial density estimation with quantile binning."""

from .baselines import KdeModel, kde_cdf, kde_pdf
from .basis_lagrange import (LagrangeFit, chebyshev_nodes, lagrange_moment_matrix,
                             solve_lagrange)
from .basis_monomial import MonomialFit, monomial_moment_matrix, solve_monomial
from .binning import BinPartition, partition, quantile_boundaries, quantile_partition
from .density import (FeasibilityReport, PiecewiseDensity, assemble,
                      check_nonnegativity)
from .estimators import GaussianKDE, PiecewisePolynomialDensity
from .gof import EmpiricalCdf, gof_index, ks_statistic
from .moments import BinMomentVector, bin_raw_moments, weighted_targets
from .sampling import BENCHMARKS, DistributionSpec, draw_sample, true_cdf, true_pdf
from .selection import (CellResult, GridConfig, SelectionResult, fit_piecewise,
                        grid_search, sensitivity_matrices)

__version__ = "0.1.0"

__all__ = [
    "BENCHMARKS", "BinMomentVector", "BinPartition", "CellResult", "DistributionSpec",
    "EmpiricalCdf", "FeasibilityReport", "GaussianKDE", "GridConfig", "KdeModel",
    "LagrangeFit", "MonomialFit", "PiecewiseDensity", "PiecewisePolynomialDensity",
    "SelectionResult", "assemble", "bin_raw_moments", "check_nonnegativity",
    "chebyshev_nodes", "draw_sample", "fit_piecewise", "gof_index", "grid_search",
    "kde_cdf", "kde_pdf", "ks_statistic", "lagrange_moment_matrix",
    "monomial_moment_matrix", "partition", "quantile_boundaries", "quantile_partition",
    "sensitivity_matrices", "solve_lagrange", "solve_monomial", "true_cdf", "true_pdf",
    "weighted_targets",
]
