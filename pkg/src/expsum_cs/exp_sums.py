"""Random exponential sums over Z_N and T, with their moments.

The central object is S(m) = sum_j e(m X_j / N) for a tuple of frequencies
X_1..X_n.  Viewed as a function of m it is the kernel L whose frequency
coefficients are the multiplicities of the distinct X_j, so the same array
serves as the exponential sum and as the dual-certificate candidate.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import InvalidModulusError, InvalidParameterError

__all__ = [
    "FrequencyDraw",
    "ContinuousDraw",
    "KernelProfile",
    "exp_sum_discrete",
    "exp_sums_all",
    "exp_sum_continuous",
    "kernel_profile",
    "certificate_check",
    "moment_exact",
    "j_moment",
    "lemma_coefficient_terms",
    "mgf_discrete",
    "mgf_continuous",
    "rotated_mgf",
]


@dataclass(frozen=True)
class FrequencyDraw:
    """An ordered tuple of frequencies in Z_N; repeats are allowed."""

    modulus: int
    points: tuple[int, ...]

    def __post_init__(self):
        if int(self.modulus) != self.modulus or self.modulus < 2:
            raise InvalidModulusError(f"modulus must be >= 2, got {self.modulus!r}")
        pts = tuple(int(p) for p in self.points)
        if not pts:
            raise InvalidParameterError("a draw needs at least one point")
        if any(p < 0 or p >= self.modulus for p in pts):
            raise InvalidParameterError("every point must lie in [0, N)")
        object.__setattr__(self, "points", pts)

    @classmethod
    def random(cls, N: int, n: int, rng) -> "FrequencyDraw":
        rng = np.random.default_rng(rng)
        return cls(N, tuple(rng.integers(0, N, size=n).tolist()))

    @property
    def n(self) -> int:
        return len(self.points)

    def range(self) -> frozenset[int]:
        """The set Omega of distinct values taken by the draw."""
        return frozenset(self.points)

    def multiplicities(self) -> dict[int, int]:
        """Frequency coefficients of the kernel: omega -> number of j with X_j = omega."""
        return dict(sorted(Counter(self.points).items()))

    def counts(self) -> np.ndarray:
        return np.bincount(np.asarray(self.points), minlength=self.modulus)

    def dilate(self, m: int) -> "FrequencyDraw":
        return FrequencyDraw(self.modulus, tuple((m * p) % self.modulus for p in self.points))


@dataclass(frozen=True)
class ContinuousDraw:
    """Phases x_1..x_n on the circle T = R/Z, each in [0, 1)."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise InvalidParameterError("a draw needs at least one point")
        if any(not (0.0 <= p < 1.0) for p in pts):
            raise InvalidParameterError("every phase must lie in [0, 1)")
        object.__setattr__(self, "points", pts)

    @classmethod
    def random(cls, n: int, rng) -> "ContinuousDraw":
        rng = np.random.default_rng(rng)
        return cls(tuple(rng.random(n).tolist()))

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class KernelProfile:
    """Values L(t), t in Z_N, of a frequency-limited kernel.

    ``peak`` is L(0) and ``offpeak_sup`` is the largest |L(t)| over the N-1
    nonzero t, attained at ``argmax``.
    """

    modulus: int
    values: np.ndarray = field(repr=False)
    peak: float
    offpeak_sup: float
    argmax: int
    coefficients: Mapping[int, int] | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "values": [[float(z.real), float(z.imag)] for z in self.values],
            "peak": self.peak,
            "offpeak_sup": self.offpeak_sup,
            "argmax": self.argmax,
        }


def exp_sums_all(counts: np.ndarray) -> np.ndarray:
    """All exponential sums S(m), m = 0..N-1, from multiplicity counts.

    ``counts`` may be 2-D with one draw per row; the transform runs along the
    last axis.
    """
    counts = np.asarray(counts, dtype=np.float64)
    N = counts.shape[-1]
    # S(m) = sum_w c(w) e(+m w / N) = N * ifft(c)(m)
    S = np.fft.ifft(counts, axis=-1) * N
    # exact at m = 0
    S[..., 0] = counts.sum(axis=-1)
    return S


def exp_sum_discrete(draw: FrequencyDraw, m: int) -> complex:
    """S(m) = sum_j exp(2 pi i m X_j / N), evaluated directly."""
    N = draw.modulus
    phases = (np.asarray(draw.points, dtype=np.int64) * (int(m) % N)) % N
    if not phases.any():
        return complex(draw.n)
    return complex(np.exp(2j * np.pi * phases / N).sum())


def exp_sum_continuous(draw: ContinuousDraw, m: int | np.ndarray) -> complex | np.ndarray:
    """sum_j exp(2 pi i m x_j); vectorised over an array of m."""
    x = np.asarray(draw.points)
    m_arr = np.asarray(m, dtype=np.float64)
    out = np.exp(2j * np.pi * np.multiply.outer(m_arr, x)).sum(axis=-1)
    return complex(out) if out.ndim == 0 else out


def kernel_profile(draw: FrequencyDraw) -> KernelProfile:
    N = draw.modulus
    L = exp_sums_all(draw.counts())
    mags = np.abs(L[1:])
    k = int(np.argmax(mags))
    L.setflags(write=False)
    return KernelProfile(
        modulus=N,
        values=L,
        peak=float(L[0].real),
        offpeak_sup=float(mags[k]),
        argmax=k + 1,
        coefficients=draw.multiplicities(),
    )


def certificate_check(profile: KernelProfile, T: int) -> tuple[bool, float]:
    """Does the kernel satisfy sup_{t != 0} |L(t)| < L(0) / (2T)?

    Returns ``(holds, margin)`` with ``margin = L(0)/(2T) - offpeak_sup``.
    A zero margin counts as failure.
    """
    if T < 1:
        raise InvalidParameterError(f"sparsity T must be >= 1, got {T}")
    margin = profile.peak / (2 * T) - profile.offpeak_sup
    return margin > 0, float(margin)


def _compositions_weight(n: int, p: int) -> int:
    # coefficient extraction: sum over p_1+..+p_n = p of prod 1/p_i!^2, times p!^2
    base = [Fraction(1, math.factorial(k) ** 2) for k in range(p + 1)]
    poly = [Fraction(1)] + [Fraction(0)] * p
    for _ in range(n):
        poly = [sum(poly[i] * base[k - i] for i in range(k + 1)) for k in range(p + 1)]
    val = poly[p] * math.factorial(p) ** 2
    assert val.denominator == 1
    return int(val)


def moment_exact(n: int, p: int) -> int:
    """E |sum_{j=1}^n e(x_j)|^{2p} for iid uniform phases, as an exact integer.

    This is the number of pairs of length-p words over an n-letter alphabet
    that are anagrams of each other: sum over compositions p_1+..+p_n = p of
    (p! / (p_1! ... p_n!))^2.
    """
    if n < 1 or p < 0:
        raise InvalidParameterError("need n >= 1 and p >= 0")
    return _compositions_weight(int(n), int(p))


def j_moment(N: int, k: int) -> Fraction:
    """J_k = E cos^k(2 pi X / N) for X uniform on Z_N, exactly.

    Expanding cos^k as a sum of cos((k-2j)u) leaves only the terms whose
    frequency is a multiple of N.
    """
    if N < 2 or k < 0:
        raise InvalidParameterError("need N >= 2 and k >= 0")
    total = sum(math.comb(k, j) for j in range(k + 1) if (k - 2 * j) % N == 0)
    return Fraction(total, 2**k)


def lemma_coefficient_terms(N: int, k: int) -> tuple[Fraction, Fraction]:
    """Both sides of the per-order comparison used to prove the MGF lemma.

    Returns ``(lhs, rhs)`` with lhs = 2k J_{2k-1} + J_{2k} + J_{2k+1}/(2k+1)
    and rhs = (2k)! / (4^k k!).
    """
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    lhs = 2 * k * j_moment(N, 2 * k - 1) + j_moment(N, 2 * k) + j_moment(N, 2 * k + 1) / (2 * k + 1)
    rhs = Fraction(math.factorial(2 * k), 4**k * math.factorial(k))
    return lhs, rhs


def mgf_discrete(N: int, u: float) -> float:
    """E exp(u cos(2 pi X / N)) for X uniform on Z_N (exact N-term average)."""
    return rotated_mgf(N, u, 0.0)


def rotated_mgf(N: int, u: float, phi: float) -> float:
    """E exp(u cos(2 pi X / N - phi)) for X uniform on Z_N."""
    if N < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {N}")
    if u < 0:
        raise InvalidParameterError("u must be nonnegative")
    x = np.arange(N)
    return float(np.mean(np.exp(u * np.cos(2 * np.pi * x / N - phi))))


def mgf_continuous(u: float) -> float:
    """E exp(u cos(2 pi x)) for x uniform on T, i.e. the Bessel value I_0(u)."""
    from scipy.special import i0

    return float(i0(u))
