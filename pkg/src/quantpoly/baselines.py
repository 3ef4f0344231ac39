"""Fixed-bandwidth Gaussian kernel density estimate, used as a comparison baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from ._validation import check_points, check_positive_real, check_sample

# Kernel terms further than this many bandwidths away are 0 or 1 to double
# precision (ndtr(-9) ~ 1e-19), so they are counted instead of evaluated.
_REACH = 9.0
_BLOCK = 1 << 22

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class KdeModel:
    sample: np.ndarray
    bandwidth: float

    def __post_init__(self):
        object.__setattr__(self, "bandwidth", check_positive_real(self.bandwidth, "bandwidth"))
        object.__setattr__(self, "sample", check_sample(self.sample))

    def pdf(self, x):
        return kde_pdf(self, x)

    def cdf(self, x):
        return kde_cdf(self, x)


def _kernel_sum(model, x, kernel, below_weight):
    x = check_points(x)
    xa = np.atleast_1d(x).astype(np.float64)
    order = np.argsort(xa, kind="stable")
    xs = xa[order]
    s, h = model.sample, model.bandwidth
    lo_all = np.searchsorted(s, xs - _REACH * h, side="left")
    hi_all = np.searchsorted(s, xs + _REACH * h, side="right")
    out = np.empty_like(xs)
    start = 0
    while start < xs.size:
        # grow the block while the dense kernel matrix stays within budget
        stop = start + 1
        while stop < xs.size and (stop + 1 - start) * (hi_all[stop] - lo_all[start]) <= _BLOCK:
            stop += 1
        lo, hi = lo_all[start], hi_all[stop - 1]
        z = (xs[start:stop, None] - s[None, lo:hi]) / h
        out[start:stop] = kernel(z).sum(axis=1) + below_weight * lo
        start = stop
    res = np.empty_like(out)
    res[order] = out
    return res.reshape(x.shape) if x.ndim else float(res[0])


def kde_pdf(model, x):
    """``(1 / (N h)) * sum phi((x - x_i) / h)``."""
    out = _kernel_sum(model, x, lambda z: np.exp(-0.5 * z * z) * _INV_SQRT_2PI, 0.0)
    return out / (model.sample.size * model.bandwidth)


def kde_cdf(model, x):
    """``(1 / N) * sum Phi((x - x_i) / h)``."""
    out = _kernel_sum(model, x, ndtr, 1.0) / model.sample.size
    return np.clip(out, 0.0, 1.0) if np.ndim(out) else min(max(out, 0.0), 1.0)
