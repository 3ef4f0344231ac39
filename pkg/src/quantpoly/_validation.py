"""Input validation helpers shared by the estimators and free functions."""

import numbers

import numpy as np
from sklearn.utils import check_array

from .exceptions import InsufficientDataError, ParameterError


def check_sample(X, *, min_samples=1, assume_sorted=False):
    """Return ``X`` as a sorted 1-D float64 array.

    Accepts a 1-D array-like or a single-column 2-D array-like, which is
    what sklearn pipelines hand to density estimators.
    """
    arr = check_array(X, ensure_2d=False, dtype=np.float64,
                      ensure_min_samples=0)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ParameterError(
                f"expected a single feature, got {arr.shape[1]} columns")
        arr = arr[:, 0]
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if arr.size < min_samples:
        raise InsufficientDataError(
            f"need at least {min_samples} samples, got {arr.size}")
    if not assume_sorted:
        arr = np.sort(arr, kind="stable")
    return arr


def check_points(x):
    """Coerce evaluation points to a float64 array, keeping scalars scalar."""
    return np.asarray(x, dtype=np.float64)


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ParameterError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ParameterError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_positive_real(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a real number, got {value!r}")
    if not np.isfinite(value) or value <= 0:
        raise ParameterError(f"{name} must be > 0, got {value}")
    return value


def check_int_list(values, name, minimum=1):
    out = [check_positive_int(v, name, minimum) for v in values]
    if not out:
        raise ParameterError(f"{name} must be nonempty")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ParameterError(f"{name} must be strictly ascending, got {out}")
    return out
