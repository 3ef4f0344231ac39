"""Benchmark distributions: Normal, Weibull and finite mixtures of them.

Samples are drawn with numpy's ``PCG64`` bit generator through
``numpy.random.Generator``; a seed therefore reproduces the same draws for a
given numpy release line.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from ._validation import check_points, check_positive_int
from .exceptions import ParameterError

FAMILIES = ("normal", "weibull")
_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Component:
    """One mixture component.

    ``params`` holds ``(mu, sigma)`` for ``"normal"`` and ``(k, lam)`` for
    ``"weibull"`` (shape, scale).
    """

    family: str
    params: tuple
    weight: float = 1.0

    def __post_init__(self):
        family = self.family.lower()
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "weight", float(self.weight))
        if family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        if len(self.params) != 2:
            raise ParameterError(f"{family} takes two parameters")
        if not all(math.isfinite(p) for p in self.params):
            raise ParameterError(f"non-finite parameter in {self}")
        if family == "normal" and self.params[1] <= 0:
            raise ParameterError(f"sigma must be > 0, got {self.params[1]}")
        if family == "weibull" and min(self.params) <= 0:
            raise ParameterError(f"k and lambda must be > 0, got {self.params}")
        if not 0 < self.weight <= 1:
            raise ParameterError(f"weight must be in (0, 1], got {self.weight}")

    def pdf(self, x):
        if self.family == "normal":
            mu, sigma = self.params
            z = (x - mu) / sigma
            return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2 * math.pi))
        k, lam = self.params
        out = np.zeros_like(x)
        pos = x >= 0
        z = x[pos] / lam
        with np.errstate(divide="ignore"):
            out[pos] = (k / lam) * np.power(z, k - 1) * np.exp(-np.power(z, k))
        return out

    def cdf(self, x):
        if self.family == "normal":
            mu, sigma = self.params
            return ndtr((x - mu) / sigma)
        k, lam = self.params
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = -np.expm1(-np.power(x[pos] / lam, k))
        return out

    def draw(self, rng, n):
        if self.family == "normal":
            mu, sigma = self.params
            return rng.normal(mu, sigma, size=n)
        k, lam = self.params
        return lam * rng.weibull(k, size=n)

    def to_dict(self):
        if self.family == "normal":
            names = ("mu", "sigma")
        else:
            names = ("k", "lambda")
        d = {"family": self.family}
        d.update(zip(names, self.params))
        d["weight"] = self.weight
        return d


@dataclass(frozen=True)
class DistributionSpec:
    """A finite mixture of Normal and Weibull components."""

    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ParameterError("a distribution needs at least one component")
        total = math.fsum(c.weight for c in comps)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ParameterError(f"weights sum to {total!r}, expected 1")

    @classmethod
    def normal(cls, mu, sigma):
        return cls((Component("normal", (mu, sigma)),))

    @classmethod
    def weibull(cls, k, lam):
        return cls((Component("weibull", (k, lam)),))

    @classmethod
    def mixture(cls, *components):
        return cls(tuple(components))

    @classmethod
    def from_dict(cls, d):
        comps = []
        try:
            for c in d["components"]:
                family = c["family"].lower()
                if family == "normal":
                    params = (c["mu"], c["sigma"])
                elif family == "weibull":
                    params = (c["k"], c.get("lambda", c.get("lam")))
                else:
                    raise ParameterError(f"unknown family {c['family']!r}")
                comps.append(Component(family, params, c.get("weight", 1.0)))
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed distribution spec: {exc}") from exc
        return cls(tuple(comps))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {"components": [c.to_dict() for c in self.components]}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @property
    def scale(self):
        """A characteristic length, used to size finite-difference steps."""
        s = 0.0
        for c in self.components:
            s = max(s, c.params[1])
        return s


BENCHMARKS = {
    "normal": DistributionSpec.normal(1.0, 0.16),
    "weibull": DistributionSpec.weibull(1.0, 1.2),
    # Only sigma/mu ratios of 1.0 and 0.2 are published; means 1 and 5 with
    # equal weights give two separated modes.
    "bimodal-normal": DistributionSpec.mixture(
        Component("normal", (1.0, 1.0), 0.5),
        Component("normal", (5.0, 1.0), 0.5),
    ),
    "trimodal-weibull": DistributionSpec.mixture(
        Component("weibull", (0.8, 1.5), 1 / 3),
        Component("weibull", (2.5, 5.2), 1 / 3),
        Component("weibull", (5.0, 8.2), 1 / 3),
    ),
}


def get_benchmark(name):
    try:
        return BENCHMARKS[name.lower()]
    except KeyError:
        raise ParameterError(
            f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}")


def draw_sample(spec, n, seed=0):
    """Draw ``n`` sorted variates from ``spec``.

    Component membership is drawn first (one multinomial draw), then each
    component's variates, so the result depends only on ``(spec, n, seed)``.
    """
    n = check_positive_int(n, "n")
    rng = np.random.Generator(np.random.PCG64(seed))
    weights = np.array([c.weight for c in spec.components])
    counts = rng.multinomial(n, weights / weights.sum())
    parts = [c.draw(rng, m) for c, m in zip(spec.components, counts)]
    out = np.concatenate(parts)
    out.sort(kind="stable")
    return out


def true_pdf(spec, x):
    x = check_points(x)
    xa = np.atleast_1d(x).astype(np.float64)
    out = np.zeros_like(xa)
    for c in spec.components:
        out += c.weight * c.pdf(xa)
    return out.reshape(x.shape) if x.ndim else float(out[0])


def true_cdf(spec, x):
    x = check_points(x)
    xa = np.atleast_1d(x).astype(np.float64)
    out = np.zeros_like(xa)
    for c in spec.components:
        out += c.weight * c.cdf(xa)
    np.clip(out, 0.0, 1.0, out=out)
    return out.reshape(x.shape) if x.ndim else float(out[0])
