"""Equal-frequency (quantile) binning of a sorted sample."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int
from .exceptions import InsufficientDataError


@dataclass(frozen=True)
class Bin:
    """Members ``sample[start:end]`` with data extent ``[a, b]``."""

    a: float
    b: float
    count: int
    start: int
    end: int

    @property
    def width(self):
        return self.b - self.a


@dataclass(frozen=True)
class BinPartition:
    """Disjoint quantile bins covering a sorted sample.

    Attributes
    ----------
    n_bins : int
        Number of nonempty bins actually produced.
    boundaries : ndarray
        The interior cut points that were used, one fewer than the requested
        bin count.
    bins : tuple of Bin
    n_requested : int
        Bin count asked for before empty bins were merged away.
    merged : tuple of int
        Original (0-based) indices of bins that came out empty and were merged
        into their left neighbour.
    """

    n_bins: int
    boundaries: np.ndarray
    bins: tuple
    n_requested: int
    merged: tuple = ()

    @property
    def n_samples(self):
        return sum(b.count for b in self.bins)

    @property
    def masses(self):
        n = self.n_samples
        return np.array([b.count / n for b in self.bins])

    def members(self, sample, i):
        b = self.bins[i]
        return sample[b.start:b.end]

    def to_dict(self):
        return {
            "n_bins": self.n_bins,
            "n_requested": self.n_requested,
            "boundaries": [float(v) for v in self.boundaries],
            "merged": list(self.merged),
            "bins": [
                {"a": b.a, "b": b.b, "count": b.count, "start": b.start, "end": b.end}
                for b in self.bins
            ],
        }


def quantile_boundaries(sample, n_bins):
    """Interior cut points at empirical quantiles ``i / n_bins``.

    Cut ``i`` (1-based) is the order statistic of 1-based rank
    ``ceil(i * N / n_bins)``, so that for ``N`` divisible by ``n_bins`` every
    bin gets exactly ``N / n_bins`` points.
    """
    n_bins = check_positive_int(n_bins, "n_bins")
    sample = np.asarray(sample, dtype=np.float64)
    n = sample.size
    if n_bins > n:
        raise InsufficientDataError(f"n_bins={n_bins} exceeds sample size {n}")
    i = np.arange(1, n_bins)
    ranks = (i * n + n_bins - 1) // n_bins
    return sample[ranks - 1].copy()


def partition(sample, boundaries):
    """Assign a sorted sample to bins ``(-inf, c1], (c1, c2], ..., (c_last, inf)``.

    Bins left empty by tied cut points are merged into their left neighbour.
    """
    sample = np.asarray(sample, dtype=np.float64)
    boundaries = np.asarray(boundaries, dtype=np.float64)
    n = sample.size
    if n == 0:
        raise InsufficientDataError("cannot partition an empty sample")
    ends = np.searchsorted(sample, boundaries, side="right")
    edges = np.concatenate(([0], ends, [n]))
    bins = []
    merged = []
    for i in range(len(edges) - 1):
        start, end = int(edges[i]), int(edges[i + 1])
        if end <= start:
            merged.append(i)
            continue
        bins.append(Bin(float(sample[start]), float(sample[end - 1]),
                        end - start, start, end))
    # Dropping an empty bin leaves its index range to the neighbours, which
    # is the leftward merge; cuts drawn from the sample never empty bin 0.
    return BinPartition(
        n_bins=len(bins),
        boundaries=boundaries.copy(),
        bins=tuple(bins),
        n_requested=len(boundaries) + 1,
        merged=tuple(merged),
    )


def quantile_partition(sample, n_bins):
    """Shorthand for ``partition(sample, quantile_boundaries(sample, n_bins))``."""
    return partition(sample, quantile_boundaries(sample, n_bins))
