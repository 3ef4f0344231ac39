"""Grid search over bin count and moment order.

Every ``(n_bins, n_moments)`` cell is fitted, checked for non-negativity and
scored by its K-S distance to the sample. The chosen cell has the lowest K-S
among models that are non-negative up to the feasibility tolerance; if there
are none, the one with the smallest relative negativity, then K-S. With
``prefer_strict`` exactly non-negative models are preferred over nearly
non-negative ones.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from ._validation import check_int_list, check_positive_int, check_sample
from .basis_lagrange import solve_lagrange
from .basis_monomial import solve_monomial
from .binning import quantile_partition
from .density import BASES, assemble, check_nonnegativity
from .exceptions import (DegreesOfFreedomError, InsufficientDataError,
                         ParameterError, QuantpolyError)
from .gof import gof_from_values, ks_from_values, model_cdf_values
from .moments import partition_moments, truncate, weighted_targets

_SOLVERS = {"monomial": solve_monomial, "lagrange": solve_lagrange}


@dataclass(frozen=True)
class GridConfig:
    nb_list: tuple = tuple(range(1, 20))
    nm_list: tuple = tuple(range(3, 12))
    feasibility_tolerance_factor: float = 1e-3
    basis: str = "monomial"
    samples_per_piece: int = 64
    n_jobs: int = 1
    prefer_strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "nb_list", tuple(check_int_list(self.nb_list, "nb_list")))
        minimum = 2 if self.basis == "lagrange" else 1
        object.__setattr__(self, "nm_list",
                           tuple(check_int_list(self.nm_list, "nm_list", minimum)))
        if self.basis not in BASES:
            raise ParameterError(f"basis must be one of {BASES}, got {self.basis!r}")
        if not self.feasibility_tolerance_factor >= 0:
            raise ParameterError("feasibility_tolerance_factor must be >= 0")
        check_positive_int(self.samples_per_piece, "samples_per_piece", 2)
        check_positive_int(self.n_jobs, "n_jobs")

    def to_dict(self):
        d = asdict(self)
        d["nb_list"] = list(self.nb_list)
        d["nm_list"] = list(self.nm_list)
        return d


@dataclass(frozen=True)
class CellResult:
    """Outcome of one grid cell.

    ``feasible`` means the density minimum is at least ``-tolerance``;
    ``nearly_feasible`` marks the feasible cells whose minimum is still
    negative. ``skipped`` cells had fewer samples than bins; ``solver_failed``
    cells had a degenerate or singular bin system. Neither has a K-S value.
    """

    n_bins: int
    n_moments: int
    ks: float = math.nan
    gof: float = math.nan
    feasible: bool = False
    nearly_feasible: bool = False
    solver_failed: bool = False
    skipped: bool = False
    min_value: float = math.nan
    peak_value: float = math.nan
    relative_violation: float = math.nan
    condition: float = math.nan
    max_residual: float = math.nan
    effective_bins: int = 0
    message: str = ""

    @property
    def evaluated(self):
        return not (self.skipped or self.solver_failed) and math.isfinite(self.ks)

    @property
    def strict(self):
        return self.feasible and not self.nearly_feasible

    @property
    def feasibility_class(self):
        """0 strictly feasible, 1 nearly feasible, 2 infeasible, None unevaluated."""
        if not self.evaluated:
            return None
        if self.strict:
            return 0
        return 1 if self.nearly_feasible else 2

    def to_dict(self):
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, float) and not math.isfinite(v):
                d[k] = None
        return d

    @classmethod
    def from_dict(cls, d):
        d = {k: (math.nan if v is None and k in _FLOAT_FIELDS else v) for k, v in d.items()}
        return cls(**d)


_FLOAT_FIELDS = {"ks", "gof", "min_value", "peak_value", "relative_violation",
                 "condition", "max_residual"}


def _selection_key(cell, prefer_strict):
    cls = cell.feasibility_class
    if cls == 2:
        return (2, cell.relative_violation, cell.ks, cell.n_moments, cell.n_bins)
    if not prefer_strict:
        cls = 0
    return (cls, 0.0, cell.ks, cell.n_moments, cell.n_bins)


def choose_cell(cells, prefer_strict=False):
    """Best cell among ``cells`` by feasibility class, then K-S, then parsimony.

    Ties in K-S go to fewer moments, then fewer bins.
    """
    candidates = [c for c in cells if c.evaluated]
    if not candidates:
        return None
    return min(candidates, key=lambda c: _selection_key(c, prefer_strict))


@dataclass(frozen=True, eq=False)
class SelectionResult:
    """All cells of a scan (rows ``nb_list``, columns ``nm_list``) and the choice."""

    config: GridConfig
    cells: tuple
    chosen: CellResult | None
    model: object = None
    n_samples: int = 0

    def cell(self, n_bins, n_moments):
        i = self.config.nb_list.index(n_bins)
        j = self.config.nm_list.index(n_moments)
        return self.cells[i][j]

    def _matrix(self, attr):
        return np.array([[getattr(c, attr) for c in row] for row in self.cells],
                        dtype=np.float64)

    @property
    def ks_matrix(self):
        return self._matrix("ks")

    @property
    def gof_matrix(self):
        return self._matrix("gof")

    def flat_cells(self):
        return [c for row in self.cells for c in row]

    def to_dict(self, include_cells=True, include_model=False):
        d = {
            "config": self.config.to_dict(),
            "n_samples": self.n_samples,
            "chosen": None if self.chosen is None else self.chosen.to_dict(),
        }
        if include_cells:
            d["cells"] = [[c.to_dict() for c in row] for row in self.cells]
        if include_model and self.model is not None:
            d["model"] = self.model.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        from .density import PiecewiseDensity

        config = GridConfig(**d["config"])
        cells = tuple(tuple(CellResult.from_dict(c) for c in row) for row in d.get("cells", ()))
        chosen = None if d.get("chosen") is None else CellResult.from_dict(d["chosen"])
        model = PiecewiseDensity.from_dict(d["model"]) if d.get("model") else None
        return cls(config, cells, chosen, model, d.get("n_samples", 0))


def fit_partition(sample, part, moments, n_moments, basis="monomial"):
    """Solve every bin of ``part`` and assemble the density.

    ``moments`` are local-coordinate moment vectors with at least
    ``n_moments`` entries, as returned by :func:`partition_moments`.
    """
    solve = _SOLVERS[basis]
    fits = []
    for b, m in zip(part.bins, moments):
        m = truncate(m, n_moments)
        fits.append(solve(b.a, b.b, n_moments, weighted_targets(m),
                          local=m.support is not None, n_bins=part.n_requested))
    return assemble(part, fits, basis)


def fit_piecewise(sample, n_bins, n_moments, basis="monomial", assume_sorted=False):
    """Quantile-bin ``sample`` into ``n_bins`` and fit ``n_moments`` moments per bin.

    ``n_bins=1`` gives the global (single-polynomial) fit.
    """
    sample = check_sample(sample, assume_sorted=assume_sorted)
    n_moments = check_positive_int(n_moments, "n_moments")
    part = quantile_partition(sample, n_bins)
    moments = partition_moments(sample, part, n_moments)
    return fit_partition(sample, part, moments, n_moments, basis)


def _evaluate_row(sample, n_bins, config):
    nm_list = config.nm_list
    if n_bins > sample.size:
        msg = f"n_bins={n_bins} exceeds sample size {sample.size}"
        return [(CellResult(n_bins, nm, skipped=True, message=msg), None) for nm in nm_list]
    part = quantile_partition(sample, n_bins)
    moments = partition_moments(sample, part, max(nm_list))
    row = []
    for nm in nm_list:
        row.append(evaluate_cell(sample, part, moments, nm, config))
    return row


def evaluate_cell(sample, part, moments, n_moments, config):
    """Fit, feasibility, K-S and GoF for one cell; returns ``(CellResult, model)``."""
    n_bins = part.n_requested
    base = CellResult(n_bins, n_moments, effective_bins=part.n_bins)
    try:
        model = fit_partition(sample, part, moments, n_moments, config.basis)
    except QuantpolyError as exc:
        return replace(base, solver_failed=True, message=str(exc)), None
    report = check_nonnegativity(model, config.samples_per_piece,
                                 tolerance_factor=config.feasibility_tolerance_factor)
    try:
        f = model_cdf_values(sample, model.cdf)
    except QuantpolyError as exc:
        return replace(base, solver_failed=True, message=str(exc)), None
    ks = ks_from_values(f)
    try:
        gof = gof_from_values(sample, f, n_bins, n_moments)
        msg = ""
    except DegreesOfFreedomError as exc:
        gof, msg = math.nan, str(exc)
    cell = replace(
        base,
        ks=ks,
        gof=gof,
        feasible=report.feasible,
        nearly_feasible=report.nearly_feasible,
        min_value=report.min_value,
        peak_value=report.peak_value,
        relative_violation=report.relative_violation,
        condition=max(p.condition_estimate for p in model.pieces),
        max_residual=max(p.residual for p in model.pieces),
        message=msg,
    )
    return cell, model


def grid_search(sample, config=None, assume_sorted=False):
    """Evaluate every cell of ``config``'s grid and pick the best model.

    Rows whose bin count exceeds the sample size are flagged as skipped;
    the search only fails if no cell at all could be evaluated.
    """
    config = GridConfig() if config is None else config
    sample = check_sample(sample, assume_sorted=assume_sorted)
    nb_list = config.nb_list
    if config.n_jobs > 1 and len(nb_list) > 1:
        with ThreadPoolExecutor(max_workers=config.n_jobs) as pool:
            rows = list(pool.map(lambda nb: _evaluate_row(sample, nb, config), nb_list))
    else:
        rows = [_evaluate_row(sample, nb, config) for nb in nb_list]
    cells = tuple(tuple(c for c, _ in row) for row in rows)
    models = {(c.n_bins, c.n_moments): m for row in rows for c, m in row}
    chosen = choose_cell((c for row in cells for c in row), config.prefer_strict)
    if chosen is None:
        raise InsufficientDataError("no grid cell could be evaluated")
    return SelectionResult(config, cells, chosen,
                           models[(chosen.n_bins, chosen.n_moments)], sample.size)


def sensitivity_matrices(sample, config=None, assume_sorted=False):
    """K-S and GoF matrices, rows ``nb_list`` by columns ``nm_list``; NaN marks flagged cells."""
    result = grid_search(sample, config, assume_sorted)
    return result.ks_matrix, result.gof_matrix
