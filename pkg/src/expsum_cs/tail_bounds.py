"""Closed-form tail bounds for flat random exponential sums.

All logarithms are natural.  Every bound returns a plain float; bounds that
are >= 1 say nothing and are *not* clamped.  :func:`report` wraps a bound in
a :class:`BoundReport` that carries the vacuity flag and notes.

The sector constant ``a^2 = cos^2(pi / nu)`` enters every Laplace-transform
bound; ``nu >= 3`` is required.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field

from .errors import InvalidParameterError

__all__ = [
    "BoundQuery",
    "BoundReport",
    "ExampleRow",
    "is_prime",
    "sector_constant",
    "theorem_a_range",
    "theorem1_failure",
    "optimal_nu_theorem1",
    "clamped_nu",
    "theorem_a_comparison",
    "tijdeman_range",
    "log_tijdeman_range",
    "explicitness_exponent",
    "theorem2_failure",
    "theorem3_sample_size",
    "theorem3_failure",
    "refined_nu",
    "refined_nu_and_bound",
    "paper_example_table",
    "paper_table_csv",
    "report",
    "BOUND_NAMES",
]

PUBLISHED_N = {(997, 2, 2.0): 242, (997, 2, 3.0): 332}


def is_prime(N: int) -> bool:
    """Deterministic trial division."""
    N = int(N)
    if N < 2:
        return False
    if N % 2 == 0:
        return N == 2
    d = 3
    while d * d <= N:
        if N % d == 0:
            return False
        d += 2
    return True


def _check_delta(delta):
    if not (0.0 < delta < 1.0):
        raise InvalidParameterError(f"delta must lie in (0, 1), got {delta}")


def _check_n(n, low=2):
    if int(n) != n or n < low:
        raise InvalidParameterError(f"n must be an integer >= {low}, got {n}")


def _check_nu(nu):
    if int(nu) != nu or nu < 3:
        raise InvalidParameterError(f"nu must be an integer >= 3, got {nu}")


def _check_prime_modulus(N):
    if int(N) != N or N < 5 or not is_prime(N):
        raise InvalidParameterError(f"N must be prime >= 5, got {N}")


def _check_C(C):
    if not C > 1:
        raise InvalidParameterError(f"C must be > 1, got {C}")


def _check_T(T):
    if int(T) != T or T < 1:
        raise InvalidParameterError(f"T must be an integer >= 1, got {T}")


def sector_constant(nu: int) -> float:
    """a^2 = cos^2(pi / nu)."""
    _check_nu(nu)
    return math.cos(math.pi / nu) ** 2


def theorem_a_range(n: int, delta: float) -> float:
    """Frequency range (1/2) 2^{n delta^2 / 4} guaranteed by the moment method."""
    _check_n(n)
    _check_delta(delta)
    return 0.5 * 2.0 ** (n * delta**2 / 4)


def theorem1_failure(M: int, n: int, delta: float, nu: int) -> float:
    """Upper bound M nu exp(-n delta^2 a^2) on P(some m <= M has |S(m)| >= delta n).

    Phases uniform on the circle.
    """
    _check_n(n)
    _check_delta(delta)
    _check_nu(nu)
    if int(M) != M or M < 1:
        raise InvalidParameterError(f"M must be an integer >= 1, got {M}")
    return M * nu * math.exp(-n * delta**2 * sector_constant(nu))


def optimal_nu_theorem1(n: int, delta: float) -> int:
    """floor(delta pi sqrt(2n)), raised to 3 when smaller."""
    return clamped_nu(n, delta)[0]


def clamped_nu(n: int, delta: float) -> tuple[int, bool]:
    """Like :func:`optimal_nu_theorem1` but also says whether the clamp fired."""
    _check_n(n)
    _check_delta(delta)
    raw = math.floor(delta * math.pi * math.sqrt(2 * n))
    return (raw, False) if raw >= 3 else (3, True)


def theorem_a_comparison(n: int, delta: float, nu: int) -> tuple[float, float, bool]:
    """Compare the Laplace-transform range (1/nu) e^{n delta^2 a^2} with (1/2) 2^{n delta^2/4}.

    Returns ``(new_range, old_range, improves)``.
    """
    new = math.exp(n * delta**2 * sector_constant(nu)) / nu
    old = theorem_a_range(n, delta)
    return new, old, new > old


def log_tijdeman_range(n: int, delta: float) -> float:
    """Natural log of the explicit-construction range (delta/6) sqrt(n log n) - 3 log n."""
    _check_n(n, low=3)
    if not (0.0 <= delta < 1.0):
        raise InvalidParameterError(f"delta must lie in [0, 1), got {delta}")
    L = math.log(n)
    return delta / 6 * math.sqrt(n * L) - 3 * L


def tijdeman_range(n: int, delta: float) -> float:
    """exp((delta/6) sqrt(n log n) - 3 log n); may overflow to inf for huge n.

    A value below 1 means the explicit construction guarantees no m at all.
    """
    e = log_tijdeman_range(n, delta)
    return math.exp(e) if e < 709 else math.inf


def explicitness_exponent(nu: int) -> float:
    """c = 4 a^2 / log 2 - 1: with M = theorem_a_range, Theorem 1's bound reads (nu/2) M^{-c}."""
    return 4 * sector_constant(nu) / math.log(2) - 1


def theorem2_failure(N: int, n: int, delta: float, nu: int) -> float:
    """((N-1)/2) nu exp(-n delta^2 a^2), bounding failure of flatness over Z_N minus 0."""
    _check_prime_modulus(N)
    _check_n(n)
    _check_delta(delta)
    _check_nu(nu)
    return (N - 1) / 2 * nu * math.exp(-n * delta**2 * sector_constant(nu))


def theorem3_sample_size(N: int, T: int, C: float) -> int:
    """n = ceil(4 C T^2 log N)."""
    return math.ceil(4 * C * T**2 * math.log(N))


def theorem3_failure(N: int, T: int, C: float, nu: int) -> tuple[float, int]:
    """(nu/2) N^{1 - C a^2}, bound on failure of the certificate for T-sparse signals.

    Returns the bound together with the sample size ``n`` it presumes.
    """
    _check_prime_modulus(N)
    _check_T(T)
    _check_C(C)
    a2 = sector_constant(nu)
    return nu / 2 * N ** (1 - C * a2), theorem3_sample_size(N, T, C)


def refined_nu(N: int, C: float) -> int:
    """floor(pi / arcsin((2 C log N)^{-1/2})), at least 3."""
    _check_prime_modulus(N)
    _check_C(C)
    s2 = 1.0 / (2 * C * math.log(N))
    if s2 >= 1:
        raise InvalidParameterError("need 2 C log N > 1")
    return max(3, math.floor(math.pi / math.asin(math.sqrt(s2))))


def refined_nu_and_bound(N: int, T: int, C: float) -> tuple[int, float]:
    """Nu from sin^2(pi/nu) = 1/(2 C log N) and the bound (pi/2) sqrt(2 C e log N) N^{1-C}."""
    _check_T(T)
    nu = refined_nu(N, C)
    p = math.pi / 2 * math.sqrt(2 * C * math.e * math.log(N)) * N ** (1 - C)
    return nu, p


@dataclass(frozen=True)
class BoundQuery:
    """Parameters for the closed-form bounds; each bound reads only what it needs."""

    N: int | None = None
    n: int | None = None
    M: int | None = None
    delta: float | None = None
    nu: int | None = None
    C: float | None = None
    T: int | None = None

    def require(self, *names):
        missing = [k for k in names if getattr(self, k) is None]
        if missing:
            raise InvalidParameterError(f"missing parameter(s): {', '.join(missing)}")


@dataclass
class BoundReport:
    bound_name: str
    failure_bound: float
    params_used: BoundQuery
    nu_chosen: int | None = None
    n_implied: int | None = None
    vacuous: bool = False
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d["params_used"] = {k: v for k, v in d["params_used"].items() if v is not None}
        return d


def _pick_nu(q: BoundQuery, notes: list[str]) -> int:
    if q.nu is not None:
        return q.nu
    q.require("n", "delta")
    nu, clamped = clamped_nu(q.n, q.delta)
    if clamped:
        notes.append("floor(delta*pi*sqrt(2n)) < 3; nu clamped to 3")
    return nu


def report(name: str, q: BoundQuery) -> BoundReport:
    """Evaluate the bound called ``name`` (one of :data:`BOUND_NAMES`)."""
    notes: list[str] = []
    nu = None
    n_implied = None
    if name == "theorem1":
        q.require("M", "n", "delta")
        nu = _pick_nu(q, notes)
        value = theorem1_failure(q.M, q.n, q.delta, nu)
    elif name == "theorem2":
        q.require("N", "n", "delta")
        _check_prime_modulus(q.N)
        nu = _pick_nu(q, notes)
        value = theorem2_failure(q.N, q.n, q.delta, nu)
    elif name == "theorem3":
        q.require("N", "T", "C")
        if q.nu is None:
            nu, value = refined_nu_and_bound(q.N, q.T, q.C)
            notes.append("nu from sin^2(pi/nu) = 1/(2C log N); closed-form refined bound")
        else:
            nu = q.nu
            value, _ = theorem3_failure(q.N, q.T, q.C, nu)
        n_implied = theorem3_sample_size(q.N, q.T, q.C)
    elif name == "theorem_a":
        q.require("n", "delta")
        value = theorem_a_range(q.n, q.delta)
        notes.append("value is a frequency range, not a probability")
    elif name == "tijdeman":
        q.require("n", "delta")
        value = tijdeman_range(q.n, q.delta)
        notes.append("value is a frequency range, not a probability")
        if value < 1:
            notes.append("range < 1: the explicit construction guarantees nothing here")
    elif name == "explicitness":
        q.require("nu")
        nu = q.nu
        value = explicitness_exponent(nu)
        notes.append("value is the exponent c, not a probability")
    else:
        raise InvalidParameterError(f"unknown bound {name!r}; choose from {BOUND_NAMES}")
    is_prob = name in ("theorem1", "theorem2", "theorem3")
    vacuous = is_prob and value >= 1
    if vacuous:
        notes.append("bound >= 1 is vacuous")
    return BoundReport(name, value, q, nu, n_implied, vacuous, notes)


BOUND_NAMES = ("theorem1", "theorem2", "theorem3", "theorem_a", "tijdeman", "explicitness")


@dataclass(frozen=True)
class ExampleRow:
    C: float
    n: int
    p: float
    flags: tuple[str, ...] = ()


def paper_example_table(N: int = 997, T: int = 2, C_values=(2.0, 3.0)) -> list[ExampleRow]:
    """Rows (C, n, p) with n = ceil(4 C T^2 log N) and p the refined failure bound."""
    rows = []
    for C in C_values:
        C = float(C)
        n = theorem3_sample_size(N, T, C)
        flags = []
        if C <= 1:
            # the refined formula needs C > 1; N^{1-C} >= 1 makes it vacuous anyway
            p = math.pi / 2 * math.sqrt(2 * C * math.e * math.log(N)) * N ** (1 - C)
            flags.append("C<=1 outside the theorem's range")
        else:
            _, p = refined_nu_and_bound(N, T, C)
        if p >= 1:
            flags.append("vacuous")
        printed = PUBLISHED_N.get((N, T, C))
        if printed is not None and printed != n:
            flags.append(f"paper prints n={printed}; formula gives {n}")
        rows.append(ExampleRow(C, n, p, tuple(flags)))
    return rows


def paper_table_csv(rows: list[ExampleRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["C", "n", "p", "flags"])
    for r in rows:
        w.writerow([repr(r.C), r.n, repr(r.p), "; ".join(r.flags)])
    return buf.getvalue()
