"""Per-bin density as a Lagrange interpolant on Chebyshev extreme points.

The unknowns are the density values at the nodes. Basis integrals are taken
with Gauss-Legendre quadrature, which is exact here because every integrand
``x**j * l_k(x)`` has degree at most ``2 n - 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.polynomial.chebyshev import chebfit
from numpy.polynomial.legendre import leggauss

from ._validation import check_positive_int
from .basis_monomial import MAX_CONDITION, _check_support, to_local_targets
from .exceptions import IllConditionedError, ParameterError


def _unit_nodes(n):
    # -cos(l pi / (n-1)) written as a sine so the set is exactly symmetric
    lam = np.arange(n)
    return np.sin(np.pi * (2 * lam - (n - 1)) / (2 * (n - 1)))


def _chebyshev_bary_weights(n):
    w = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _general_bary_weights(nodes):
    diff = np.subtract.outer(nodes, nodes)
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def barycentric_matrix(nodes, bary_weights, x):
    """Rows ``l_k(x_i)`` for all basis polynomials, second barycentric form."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    d = np.subtract.outer(x, nodes)
    exact = d == 0.0
    hit = exact.any(axis=1)
    d[hit] = 1.0
    q = bary_weights / d
    with np.errstate(divide="ignore", invalid="ignore"):
        out = q / q.sum(axis=1, keepdims=True)
    out[hit] = exact[hit].astype(np.float64)
    return out


def chebyshev_nodes(a, b, n_moments):
    """Chebyshev extreme points mapped to ``[a, b]``, ascending, endpoints included.

    >>> chebyshev_nodes(0.0, 2.0, 3)
    array([0., 1., 2.])
    """
    a, b = _check_support(a, b)
    n = check_positive_int(n_moments, "n_moments")
    if n < 2:
        raise ParameterError("Chebyshev extreme points need n_moments >= 2")
    t = _unit_nodes(n)
    x = a + 0.5 * (b - a) * (t + 1.0)
    x[0], x[-1] = a, b
    return x


def lagrange_moment_matrix(a, b, nodes, n_moments):
    """Entries ``integral_a^b x**j l_k(x) dx`` for arbitrary distinct nodes."""
    a, b = _check_support(a, b)
    n = check_positive_int(n_moments, "n_moments", minimum=2)
    nodes = np.asarray(nodes, dtype=np.float64)
    if nodes.shape != (n,):
        raise ParameterError(f"expected {n} nodes, got shape {nodes.shape}")
    if np.unique(nodes).size != n:
        raise ParameterError("nodes must be distinct")
    g, gw = leggauss(n)
    half = 0.5 * (b - a)
    xg = a + half * (g + 1.0)
    basis = barycentric_matrix(nodes, _general_bary_weights(nodes), xg)
    powers = np.vander(xg, n, increasing=True).T
    return (powers * (gw * half)) @ basis


def _unit_lagrange_matrix(n):
    """``integral_{-1}^{1} t**j l_k(t) dt`` on the unit Chebyshev nodes."""
    g, gw = leggauss(n)
    basis = barycentric_matrix(_unit_nodes(n), _chebyshev_bary_weights(n), g)
    powers = np.vander(g, n, increasing=True).T
    return (powers * gw) @ basis


@dataclass(frozen=True, eq=False)
class LagrangeFit:
    """Node values of the moment-matched polynomial on ``[a, b]``.

    ``weights[k]`` is the density at ``nodes[k]``.
    """

    a: float
    b: float
    nodes: np.ndarray
    weights: np.ndarray
    condition_estimate: float
    residual: float

    basis = "lagrange"

    @property
    def n_moments(self):
        return len(self.weights)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        n = self.n_moments
        t = (2.0 * (x - self.a)) / (self.b - self.a) - 1.0
        L = barycentric_matrix(_unit_nodes(n), _chebyshev_bary_weights(n), t)
        out = L @ self.weights
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def series(self):
        t = _unit_nodes(self.n_moments)
        coef = chebfit(t, self.weights, self.n_moments - 1)
        return Chebyshev(coef, domain=[self.a, self.b])

    def to_dict(self):
        return {
            "a": self.a,
            "b": self.b,
            "nodes": [float(v) for v in self.nodes],
            "weights": [float(v) for v in self.weights],
            "condition_estimate": self.condition_estimate,
        }

    @classmethod
    def from_dict(cls, d):
        a, b = float(d["a"]), float(d["b"])
        return cls(a, b, np.asarray(d["nodes"], dtype=np.float64),
                   np.asarray(d["weights"], dtype=np.float64),
                   float(d.get("condition_estimate", np.nan)), np.nan)


def solve_lagrange(a, b, n_moments, targets, *, local=False, n_bins=None):
    """Node values whose Lagrange interpolant has moments ``targets`` on ``[a, b]``.

    ``targets`` follow the same convention as
    :func:`quantpoly.basis_monomial.solve_monomial`.
    """
    a, b = _check_support(a, b)
    n = check_positive_int(n_moments, "n_moments")
    if n < 2:
        raise ParameterError("the Lagrange basis needs n_moments >= 2")
    rhs = np.asarray(targets, dtype=np.float64)
    if rhs.shape != (n,):
        raise ParameterError(f"expected {n} targets, got shape {rhs.shape}")
    if not local:
        rhs = to_local_targets(a, b, rhs)
    L = _unit_lagrange_matrix(n)
    cond = float(np.linalg.cond(L))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditionedError(
            f"Lagrange moment matrix condition {cond:.3g} exceeds {MAX_CONDITION:.0e}",
            cond, n_bins, n)
    scaled = rhs * (2.0 / (b - a))
    try:
        w = np.linalg.solve(L, scaled)
    except np.linalg.LinAlgError as exc:
        raise IllConditionedError(str(exc), cond, n_bins, n) from exc
    if not np.all(np.isfinite(w)):
        raise IllConditionedError("non-finite solution", cond, n_bins, n)
    denom = np.max(np.abs(scaled)) or 1.0
    residual = float(np.max(np.abs(L @ w - scaled)) / denom)
    return LagrangeFit(a, b, chebyshev_nodes(a, b, n), w, cond, residual)
