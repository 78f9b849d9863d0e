"""Independent reference computations used by several test modules."""
import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
from scipy.integrate import quad


def moment_quadrature_n2(p):
    # E|1 + e(x)|^{2p} = (1/2pi) int (2 + 2 cos t)^p dt
    val, _ = quad(lambda t: (2 + 2 * math.cos(t)) ** p, 0, 2 * math.pi, epsabs=1e-12)
    return val / (2 * math.pi)


def moment_monte_carlo(n, p, samples, seed):
    rng = np.random.default_rng(seed)
    out = []
    for chunk in range(0, samples, 200_000):
        m = min(200_000, samples - chunk)
        x = rng.random((m, n))
        out.append(np.abs(np.exp(2j * np.pi * x).sum(axis=1)) ** (2 * p))
    v = np.concatenate(out)
    return v.mean(), v.std(ddof=1) / math.sqrt(samples)


def j_moment_brute(N, k):
    """Average of cos^k(2 pi x / N) over residues at 60 digits, snapped to the lattice 2^-k Z."""
    with mpmath.workdps(60):
        avg = mpmath.fsum(mpmath.cos(2 * mpmath.pi * x / N) ** k for x in range(N)) / N
        scaled = avg * 2**k
        nearest = int(mpmath.nint(scaled))
        assert abs(scaled - nearest) < mpmath.mpf(10) ** -40
    return Fraction(nearest, 2**k)


def occupancy_enumeration(N, n):
    counts = {}
    for tup in itertools.product(range(N), repeat=n):
        k = len(set(tup))
        counts[k] = counts.get(k, 0) + 1
    return {k: Fraction(c, N**n) for k, c in counts.items()}


def l1_min_oracle(N, omega, observed):
    """Solve min ||z||_1 s.t. partial DFT constraints with a generic conic solver."""
    import cvxpy as cp

    omega = list(omega)
    t = np.arange(N)
    A = np.exp(-2j * np.pi * np.outer(omega, t) / N) / math.sqrt(N)
    z = cp.Variable(N, complex=True)
    prob = cp.Problem(cp.Minimize(cp.norm1(z)), [A @ z == np.asarray(observed)])
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
    return prob.value, z.value
