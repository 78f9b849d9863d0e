"""Random frequency sets Omega in Z_N and the exact law of |Omega|.

Four exchangeable models:

* ``UniformSubset(f)``: Omega uniform among the f-subsets.
* ``BernoulliSelection(tau)``: each frequency kept independently with prob. tau.
* ``OccupationRange(n)``: Omega is the set of values of n iid uniform draws.
* ``PoissonProcess(tau)``: |Omega| ~ Poisson(tau N) conditioned on |Omega| <= N,
  then Omega uniform among subsets of that size.

Given |Omega| = k, every model is uniform over k-subsets, so the size law
determines the model.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import stats

from .errors import InvalidModulusError, InvalidParameterError
from .exp_sums import FrequencyDraw

__all__ = [
    "OmegaModel",
    "UniformSubset",
    "BernoulliSelection",
    "OccupationRange",
    "PoissonProcess",
    "SizeDistribution",
    "OmegaSample",
    "sample_omega",
    "size_distribution",
    "stirling2",
    "surjections",
    "expected_occupied",
    "model_calibration",
]


@dataclass(frozen=True)
class OmegaModel:
    modulus: int

    def __post_init__(self):
        if int(self.modulus) != self.modulus or self.modulus < 2:
            raise InvalidModulusError(f"modulus must be >= 2, got {self.modulus!r}")

    @property
    def kind(self) -> str:
        return type(self).__name__

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class UniformSubset(OmegaModel):
    f: int = 0

    def __post_init__(self):
        super().__post_init__()
        if int(self.f) != self.f or not (0 <= self.f <= self.modulus):
            raise InvalidParameterError(f"need 0 <= f <= N, got f={self.f}")

    def params(self):
        return {"f": self.f}


@dataclass(frozen=True)
class BernoulliSelection(OmegaModel):
    tau: float = 0.5

    def __post_init__(self):
        super().__post_init__()
        if not (0.0 < self.tau < 1.0):
            raise InvalidParameterError(f"tau must lie in (0, 1), got {self.tau}")

    def params(self):
        return {"tau": self.tau}


@dataclass(frozen=True)
class OccupationRange(OmegaModel):
    n: int = 1

    def __post_init__(self):
        super().__post_init__()
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError(f"n must be >= 1, got {self.n}")

    def params(self):
        return {"n": self.n}


@dataclass(frozen=True)
class PoissonProcess(OmegaModel):
    tau: float = 0.5

    def __post_init__(self):
        super().__post_init__()
        if not self.tau > 0:
            raise InvalidParameterError(f"tau must be > 0, got {self.tau}")

    def params(self):
        return {"tau": self.tau}


@dataclass(frozen=True)
class OmegaSample:
    omega: frozenset[int]
    draw: FrequencyDraw | None = None

    def to_json(self) -> dict:
        return {
            "omega": sorted(self.omega),
            "draw": list(self.draw.points) if self.draw is not None else None,
        }


def _uniform_subset(rng: np.random.Generator, N: int, k: int) -> frozenset[int]:
    return frozenset(rng.permutation(N)[:k].tolist())


def sample_omega(model: OmegaModel, seed) -> OmegaSample:
    """Draw Omega from ``model``.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts; the same
    seed always yields the same set.  Only the occupation model fills in
    ``draw`` with the underlying tuple X_1..X_n.
    """
    rng = np.random.default_rng(seed)
    N = model.modulus
    if isinstance(model, UniformSubset):
        return OmegaSample(_uniform_subset(rng, N, model.f))
    if isinstance(model, BernoulliSelection):
        keep = rng.random(N) < model.tau
        return OmegaSample(frozenset(np.flatnonzero(keep).tolist()))
    if isinstance(model, OccupationRange):
        draw = FrequencyDraw.random(N, model.n, rng)
        return OmegaSample(draw.range(), draw)
    if isinstance(model, PoissonProcess):
        lam = model.tau * N
        if stats.poisson.cdf(N, lam) < 1e-6:
            raise InvalidParameterError(f"P(|Omega| <= N) is negligible for tau*N = {lam}")
        while True:
            k = int(rng.poisson(lam))
            if k <= N:
                return OmegaSample(_uniform_subset(rng, N, k))
    raise TypeError(f"unknown model {model!r}")


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind, S(n, k) = k S(n-1, k) + S(n-1, k-1)."""
    if n == k:
        return 1
    if n == 0 or k == 0 or k > n:
        return 0
    # iterate rows to avoid deep recursion for large n
    row = [1]  # S(0, .)
    for m in range(1, n + 1):
        new = [0] * (min(m, k) + 1)
        for j in range(1, len(new)):
            left = row[j] if j < len(row) else 0
            new[j] = j * left + row[j - 1]
        row = new
    return row[k] if k < len(row) else 0


def surjections(n: int, k: int) -> int:
    """Number of maps from an n-set onto a k-set, k! S(n, k)."""
    return math.factorial(k) * stirling2(n, k)


@dataclass(frozen=True)
class SizeDistribution:
    """Law of |Omega|: ``pmf[k]`` for k in ``support``.

    Masses are :class:`~fractions.Fraction` for the first three models and
    floats for the Poisson model.
    """

    model: OmegaModel
    pmf: dict

    @property
    def support(self) -> list[int]:
        return sorted(k for k, p in self.pmf.items() if p > 0)

    def total(self):
        return sum(self.pmf.values())

    def mean(self):
        return sum(k * p for k, p in self.pmf.items())

    def variance(self):
        mu = self.mean()
        return sum((k - mu) ** 2 * p for k, p in self.pmf.items())

    def as_array(self) -> np.ndarray:
        out = np.zeros(self.model.modulus + 1)
        for k, p in self.pmf.items():
            out[k] = float(p)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "probability"])
        for k in sorted(self.pmf):
            w.writerow([k, repr(float(self.pmf[k]))])
        return buf.getvalue()


def size_distribution(model: OmegaModel) -> SizeDistribution:
    N = model.modulus
    if isinstance(model, UniformSubset):
        return SizeDistribution(model, {model.f: Fraction(1)})
    if isinstance(model, BernoulliSelection):
        tau = Fraction(model.tau)
        pmf = {k: math.comb(N, k) * tau**k * (1 - tau) ** (N - k) for k in range(N + 1)}
        return SizeDistribution(model, pmf)
    if isinstance(model, OccupationRange):
        n = model.n
        total = N**n
        pmf = {
            k: Fraction(math.comb(N, k) * surjections(n, k), total)
            for k in range(1, min(n, N) + 1)
        }
        return SizeDistribution(model, pmf)
    if isinstance(model, PoissonProcess):
        ks = np.arange(N + 1)
        w = stats.poisson.pmf(ks, model.tau * N)
        w = w / w.sum()
        return SizeDistribution(model, {int(k): float(p) for k, p in zip(ks, w)})
    raise TypeError(f"unknown model {model!r}")


def expected_occupied(n: int, N: int) -> Fraction:
    """E|Omega| = N (1 - (1 - 1/N)^n) under the occupation model."""
    return N * (1 - Fraction(N - 1, N) ** n)


def model_calibration(n: int, N: int) -> tuple[int, float]:
    """Parameters (f, tau) whose models match the mean size of ``OccupationRange(n)``."""
    if n < 1 or N < 2:
        raise InvalidParameterError("need n >= 1 and N >= 2")
    mean = expected_occupied(n, N)
    # round half up; Fraction.__round__ would round half to even
    f = math.floor(mean + Fraction(1, 2))
    return int(f), float(mean / N)

