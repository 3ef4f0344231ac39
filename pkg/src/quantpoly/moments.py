"""Per-bin empirical moments and the mass-weighted targets for the solvers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int
from .exceptions import DegenerateSupportError, EmptyBinError


@dataclass(frozen=True)
class BinMomentVector:
    """Empirical moments ``mean(x**j)``, ``j = 0..order-1``, of one bin.

    ``support`` is ``None`` for moments of raw ``x``. Otherwise it is the
    ``(a, b)`` pair and the moments are of ``t = 2 (x - a) / (b - a) - 1``,
    the bin mapped onto ``[-1, 1]``.
    """

    order: int
    raw: np.ndarray
    mass: float = 1.0
    support: tuple | None = None


def _power_means(values, n_moments):
    values = np.asarray(values, dtype=np.float64)
    powers = np.ones((n_moments, values.size))
    for j in range(1, n_moments):
        powers[j] = powers[j - 1] * values
    count = values.size
    return np.array([math.fsum(row.tolist()) / count for row in powers])


def bin_raw_moments(members, n_moments, mass=1.0):
    """Raw moments of a bin, accumulated with exactly rounded summation.

    Examples
    --------
    >>> bin_raw_moments([1.0, 2.0, 3.0], 3).raw
    array([1.        , 2.        , 4.66666667])
    """
    n_moments = check_positive_int(n_moments, "n_moments")
    members = np.asarray(members, dtype=np.float64)
    if members.size == 0:
        raise EmptyBinError("bin has no members")
    return BinMomentVector(n_moments, _power_means(members, n_moments), float(mass))


def to_local(x, a, b):
    """Map ``[a, b]`` affinely onto ``[-1, 1]``."""
    return (2.0 * (np.asarray(x, dtype=np.float64) - a)) / (b - a) - 1.0


def bin_local_moments(members, a, b, n_moments, mass=1.0):
    """Moments of the bin members after mapping ``[a, b]`` onto ``[-1, 1]``.

    Mathematically a fixed linear recombination of :func:`bin_raw_moments`,
    but computed from the data directly so that narrow bins far from the
    origin keep full precision.
    """
    n_moments = check_positive_int(n_moments, "n_moments")
    members = np.asarray(members, dtype=np.float64)
    if members.size == 0:
        raise EmptyBinError("bin has no members")
    if not b > a:
        raise DegenerateSupportError(f"bin support [{a}, {b}] is degenerate")
    t = np.clip(to_local(members, a, b), -1.0, 1.0)
    return BinMomentVector(n_moments, _power_means(t, n_moments), float(mass),
                           (float(a), float(b)))


def weighted_targets(moments):
    """Targets ``mass * raw[j]`` for the moment-matching systems.

    Weighting by the bin mass makes each local polynomial integrate to its
    share of the sample, so the assembled density integrates to one.
    """
    return moments.mass * np.asarray(moments.raw, dtype=np.float64)


def partition_moments(sample, part, n_moments, local=True):
    """Moment vectors for every bin of ``part``.

    Bins with zero width cannot be mapped to ``[-1, 1]``; for those the raw
    moments are returned so the solver can report the degenerate support.
    """
    n = part.n_samples
    out = []
    for i, b in enumerate(part.bins):
        members = part.members(sample, i)
        mass = b.count / n
        if local and b.b > b.a:
            out.append(bin_local_moments(members, b.a, b.b, n_moments, mass))
        else:
            out.append(bin_raw_moments(members, n_moments, mass))
    return out


def truncate(moments, n_moments):
    """The first ``n_moments`` entries of a longer moment vector."""
    if n_moments > moments.order:
        raise ValueError(f"only {moments.order} moments available")
    return BinMomentVector(n_moments, moments.raw[:n_moments].copy(),
                           moments.mass, moments.support)
