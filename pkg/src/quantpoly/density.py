"""Assembled piecewise-polynomial density with analytic CDF and feasibility check.

The density is zero outside ``[a_1, b_last]`` and in the gaps ``(b_i, a_{i+1})``
between bins, where the CDF is flat.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._validation import check_points, check_positive_int
from .basis_lagrange import LagrangeFit
from .basis_monomial import MonomialFit
from .exceptions import ParameterError

BASES = ("monomial", "lagrange")
_FIT_TYPES = {"monomial": MonomialFit, "lagrange": LagrangeFit}


@dataclass(frozen=True)
class FeasibilityReport:
    min_value: float
    min_location: float
    feasible: bool
    tolerance_used: float
    peak_value: float = float("nan")

    @property
    def strict(self):
        """True when no negative value was found at all."""
        return self.min_value >= 0.0

    @property
    def nearly_feasible(self):
        return self.feasible and not self.strict

    @property
    def relative_violation(self):
        """``max(0, -min_value) / peak_value``; 0 for a non-negative model."""
        if self.min_value >= 0:
            return 0.0
        if not self.peak_value > 0:
            return float("inf")
        return -self.min_value / self.peak_value


@dataclass(frozen=True, eq=False)
class PiecewiseDensity:
    """One polynomial per bin, mixed by bin mass.

    Use :func:`assemble` rather than the constructor.
    """

    basis: str
    n_bins: int
    n_moments: int
    pieces: tuple
    bin_masses: np.ndarray
    cdf_offsets: np.ndarray
    antiderivatives: tuple

    @property
    def starts(self):
        return np.array([p.a for p in self.pieces])

    @property
    def ends(self):
        return np.array([p.b for p in self.pieces])

    @property
    def support(self):
        return self.pieces[0].a, self.pieces[-1].b

    @property
    def total_mass(self):
        return float(self.cdf_offsets[-1])

    def _locate(self, x):
        starts = self.starts
        idx = np.searchsorted(starts, x, side="right") - 1
        safe = np.clip(idx, 0, len(self.pieces) - 1)
        inside = (idx >= 0) & (x <= self.ends[safe])
        return idx, inside

    def pdf(self, x):
        x = check_points(x)
        xa = np.atleast_1d(x)
        out = np.zeros(xa.shape)
        idx, inside = self._locate(xa)
        for i in np.unique(idx[inside]):
            m = inside & (idx == i)
            out[m] = self.pieces[i](xa[m])
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def cdf(self, x):
        x = check_points(x)
        xa = np.atleast_1d(x)
        idx, inside = self._locate(xa)
        # left of the support -> 0, in a gap or right of it -> offset after idx
        out = np.where(idx < 0, 0.0, self.cdf_offsets[np.clip(idx + 1, 0, None)])
        for i in np.unique(idx[inside]):
            m = inside & (idx == i)
            out[m] = self.cdf_offsets[i] + self.antiderivatives[i](xa[m])
        np.clip(out, 0.0, 1.0, out=out)
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def __call__(self, x):
        return self.pdf(x)

    def to_dict(self):
        return {
            "basis": self.basis,
            "n_bins": self.n_bins,
            "n_moments": self.n_moments,
            "bin_masses": [float(w) for w in self.bin_masses],
            "pieces": [p.to_dict() for p in self.pieces],
        }

    @classmethod
    def from_dict(cls, d):
        fit_type = _FIT_TYPES[d["basis"]]
        pieces = [fit_type.from_dict(p) for p in d["pieces"]]
        return from_fits(pieces, d["bin_masses"], d["basis"], d.get("n_moments"))


def _antiderivative(fit):
    return fit.series().integ(lbnd=fit.a)


def from_fits(fits, bin_masses, basis=None, n_moments=None):
    fits = tuple(fits)
    if not fits:
        raise ParameterError("need at least one piece")
    if basis is None:
        basis = fits[0].basis
    if basis not in BASES:
        raise ParameterError(f"unknown basis {basis!r}")
    masses = np.asarray(bin_masses, dtype=np.float64)
    if masses.shape != (len(fits),):
        raise ParameterError(
            f"{len(fits)} pieces but {masses.size} bin masses")
    for prev, nxt in zip(fits, fits[1:]):
        if not nxt.a > prev.b:
            raise ParameterError("pieces must be ordered and disjoint")
    antis = tuple(_antiderivative(f) for f in fits)
    integrals = np.array([float(A(f.b)) for A, f in zip(antis, fits)])
    offsets = np.concatenate(([0.0], np.cumsum(integrals)))
    if n_moments is None:
        n_moments = max(f.n_moments for f in fits)
    return PiecewiseDensity(basis, len(fits), int(n_moments), fits, masses,
                            offsets, antis)


def assemble(part, fits, basis=None):
    """Build a :class:`PiecewiseDensity` from one fit per bin of ``part``."""
    fits = tuple(fits)
    if len(fits) != part.n_bins:
        raise ParameterError(
            f"partition has {part.n_bins} bins but {len(fits)} fits were given")
    for b, f in zip(part.bins, fits):
        if f.a != b.a or f.b != b.b:
            raise ParameterError(
                f"fit support [{f.a}, {f.b}] does not match bin [{b.a}, {b.b}]")
    return from_fits(fits, part.masses, basis)


def _piece_candidates(fit, samples_per_piece):
    grid = np.linspace(fit.a, fit.b, samples_per_piece)
    grid[-1] = fit.b
    deriv = fit.series().deriv()
    dv = deriv(grid)
    roots = []
    for k in np.nonzero(np.sign(dv[:-1]) * np.sign(dv[1:]) < 0)[0]:
        roots.append(brentq(deriv, grid[k], grid[k + 1], xtol=1e-14 * (fit.b - fit.a)))
    if roots:
        grid = np.concatenate((grid, roots))
    return grid


def check_nonnegativity(model, samples_per_piece=64, tolerance=None,
                        tolerance_factor=1e-3):
    """Minimum of the density over its support.

    Each piece is scanned on ``samples_per_piece`` equispaced points including
    both endpoints, plus every interior extremum located by bracketing sign
    changes of the derivative on that grid.

    Parameters
    ----------
    tolerance : float, optional
        Absolute slack below zero still counted as feasible. Defaults to
        ``tolerance_factor`` times the model's peak value.
    """
    samples_per_piece = check_positive_int(samples_per_piece, "samples_per_piece", 2)
    lo, lo_at, hi = np.inf, np.nan, -np.inf
    for fit in model.pieces:
        xs = _piece_candidates(fit, samples_per_piece)
        vals = np.asarray(fit(xs), dtype=np.float64)
        k = int(np.argmin(vals))
        if vals[k] < lo:
            lo, lo_at = float(vals[k]), float(xs[k])
        hi = max(hi, float(vals.max()))
    if tolerance is None:
        tolerance = tolerance_factor * max(hi, 0.0)
    return FeasibilityReport(lo, lo_at, bool(lo >= -tolerance), float(tolerance), hi)


def curve(model, grid_points=1000, lo=None, hi=None):
    """``(x, pdf, cdf)`` on a uniform grid, by default spanning the support."""
    grid_points = check_positive_int(grid_points, "grid_points", 2)
    s_lo, s_hi = model.support
    x = np.linspace(s_lo if lo is None else lo, s_hi if hi is None else hi, grid_points)
    return x, model.pdf(x), model.cdf(x)
