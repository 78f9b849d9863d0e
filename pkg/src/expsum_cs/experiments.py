"""Seeded Monte Carlo runs comparing empirical frequencies with the analytic bounds.

Every trial draws its randomness from a generator keyed by
``(master_seed, experiment tag, trial index)`` only, so results do not depend
on how trials are split between worker processes.  Aggregates are integer
counts, so the reduction is exact.
"""
from __future__ import annotations

import csv
import io
import json
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidParameterError
from .exp_sums import FrequencyDraw, certificate_check, exp_sums_all, kernel_profile
from .omega_models import (
    BernoulliSelection,
    OccupationRange,
    PoissonProcess,
    UniformSubset,
    model_calibration,
    sample_omega,
    size_distribution,
)
from .recovery import guaranteed_recovery_check
from .tail_bounds import (
    clamped_nu,
    is_prime,
    paper_example_table,
    paper_table_csv,
    refined_nu_and_bound,
    theorem1_failure,
    theorem2_failure,
    theorem3_sample_size,
)

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "TrialReport",
    "TailResult",
    "CertificateResult",
    "RecoveryRunResult",
    "ModelCompareResult",
    "ExperimentOutcome",
    "trial_seed",
    "run_tail1",
    "run_tail2",
    "run_certificate",
    "run_recovery",
    "run_model_compare",
    "run_experiment",
    "write_outputs",
    "DEFAULT_GRID",
    "run_dominance_grid",
    "SIGMAS",
]

EXPERIMENTS = ("Tail1", "Tail2", "Certificate", "Recovery", "ModelCompare", "PaperTable")
SIGMAS = 4.0
DEFAULT_GRID = {"N": (31, 97), "n": (40, 80, 160), "delta": (0.3, 0.5)}


def trial_seed(master_seed: int, tag: str, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(master_seed), zlib.crc32(tag.encode()), int(index)])


def _rng(master_seed, tag, index):
    return np.random.default_rng(trial_seed(master_seed, tag, index))


def _chunks(trials: int, workers: int):
    k = max(1, workers)
    bounds = np.linspace(0, trials, k + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _map_trials(fn, args, trials, workers):
    """Evaluate ``fn(*args, start, stop)`` over index blocks and concatenate in order."""
    blocks = _chunks(trials, workers)
    if workers <= 1 or len(blocks) == 1:
        parts = [fn(*args, a, b) for a, b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(fn, *zip(*[(*args, a, b) for a, b in blocks])))
    return np.concatenate(parts)


def _binomial_stderr(k: int, trials: int) -> float:
    p = k / trials
    return math.sqrt(p * (1 - p) / trials)


@dataclass(frozen=True)
class TrialReport:
    trial_index: int
    statistic: float
    event: bool
    seed_used: tuple[int, int, int]


@dataclass
class TailResult:
    """Empirical failure frequency of flatness against its analytic bound."""

    empirical_failure: float
    stderr: float
    bound: float
    nu: int | None
    failures: int
    trials: int
    statistics: np.ndarray = field(repr=False)

    @property
    def dominated(self) -> bool:
        if math.isnan(self.bound):
            return True
        return self.empirical_failure <= self.bound + SIGMAS * self.stderr

    def trial_reports(self, master_seed, tag, threshold) -> list[TrialReport]:
        h = zlib.crc32(tag.encode())
        return [
            TrialReport(i, float(s), bool(s >= threshold), (int(master_seed), h, i))
            for i, s in enumerate(self.statistics)
        ]


def _flat_threshold(delta):
    # guards exact ties such as |S| = n with delta = 1 against fft rounding
    return delta * (1 - 1e-12)


def _tail2_block(N, n, master_seed, tag, start, stop):
    counts = np.empty((stop - start, N), dtype=np.int64)
    for row, i in enumerate(range(start, stop)):
        X = _rng(master_seed, tag, i).integers(0, N, size=n)
        counts[row] = np.bincount(X, minlength=N)
    S = exp_sums_all(counts)
    return np.abs(S[:, 1:]).max(axis=1) / n


def _tail1_block(M, n, master_seed, tag, start, stop):
    m = np.arange(1, M + 1)
    out = np.empty(stop - start)
    for row, i in enumerate(range(start, stop)):
        x = _rng(master_seed, tag, i).random(n)
        S = np.exp(2j * np.pi * np.outer(m, x)).sum(axis=1)
        out[row] = np.abs(S).max() / n
    return out


def run_tail2(N, n, delta, trials, seed, workers=1, tag="Tail2") -> TailResult:
    """Failure frequency of max_{m != 0} |S(m)| < delta n for n uniform points of Z_N.

    The bound is evaluated at nu = floor(delta pi sqrt(2n)) (at least 3); it is
    NaN when (n, delta) lie outside the bound's hypotheses.
    """
    if not (N >= 5 and is_prime(N)):
        raise InvalidParameterError(f"N must be prime >= 5, got {N}")
    if trials < 1 or n < 1 or delta <= 0:
        raise InvalidParameterError("need trials >= 1, n >= 1, delta > 0")
    stats = _map_trials(_tail2_block, (N, n, seed, tag), trials, workers)
    k = int(np.count_nonzero(stats >= _flat_threshold(delta)))
    nu, bound = None, math.nan
    if n >= 2 and 0 < delta < 1:
        nu = clamped_nu(n, delta)[0]
        bound = theorem2_failure(N, n, delta, nu)
    return TailResult(k / trials, _binomial_stderr(k, trials), bound, nu, k, trials, stats)


def run_tail1(M, n, delta, trials, seed, workers=1, tag="Tail1") -> TailResult:
    """As :func:`run_tail2` for phases uniform on the circle and m = 1..M."""
    if M < 1 or trials < 1 or n < 1 or delta <= 0:
        raise InvalidParameterError("need M >= 1, trials >= 1, n >= 1, delta > 0")
    stats = _map_trials(_tail1_block, (M, n, seed, tag), trials, workers)
    k = int(np.count_nonzero(stats >= _flat_threshold(delta)))
    nu, bound = None, math.nan
    if n >= 2 and 0 < delta < 1:
        nu = clamped_nu(n, delta)[0]
        bound = theorem1_failure(M, n, delta, nu)
    return TailResult(k / trials, _binomial_stderr(k, trials), bound, nu, k, trials, stats)


@dataclass
class CertificateResult:
    cert_rate: float
    stderr: float
    bound_pred: float
    n: int
    nu: int
    margins: np.ndarray = field(repr=False)

    @property
    def dominated(self) -> bool:
        return self.cert_rate >= 1 - self.bound_pred - SIGMAS * self.stderr


def _cert_block(N, n, T, master_seed, tag, start, stop):
    counts = np.empty((stop - start, N), dtype=np.int64)
    for row, i in enumerate(range(start, stop)):
        X = _rng(master_seed, tag, i).integers(0, N, size=n)
        counts[row] = np.bincount(X, minlength=N)
    S = exp_sums_all(counts)
    return n / (2 * T) - np.abs(S[:, 1:]).max(axis=1)


def run_certificate(N, T, C, trials, seed, workers=1, tag="Certificate", n_cap=10**6):
    """Fraction of occupation draws with n = ceil(4 C T^2 log N) whose kernel certifies T-sparse recovery."""
    nu, bound = refined_nu_and_bound(N, T, C)
    n = theorem3_sample_size(N, T, C)
    if n > n_cap:
        raise InvalidParameterError(f"sample size {n} exceeds cap {n_cap}")
    margins = _map_trials(_cert_block, (N, n, T, seed, tag), trials, workers)
    k = int(np.count_nonzero(margins > 0))
    return CertificateResult(k / trials, _binomial_stderr(k, trials), bound, n, nu, margins)


@dataclass
class RecoveryRunResult:
    n: int
    bound_pred: float
    draws: int
    certified_draws: int
    certified_signals: int
    certified_successes: int
    certified_undecided: int
    uncertified_signals: int
    uncertified_successes: int
    rows: list = field(repr=False, default_factory=list)

    @property
    def cert_rate(self) -> float:
        return self.certified_draws / self.draws

    @property
    def undecided_fraction(self) -> float:
        total = self.certified_signals + self.uncertified_signals
        return self.certified_undecided / total if total else 0.0

    @property
    def implication_holds(self) -> bool:
        decided = self.certified_signals - self.certified_undecided
        return self.certified_successes == decided and self.undecided_fraction <= 0.01


def run_recovery(N, T, C, trials_omega, trials_x, seed, tag="Recovery", n=None, tol=1e-6):
    """Certificate check plus ``trials_x`` random T-sparse recoveries per occupation draw.

    ``n`` overrides the sample size ceil(4 C T^2 log N).
    """
    _, bound = refined_nu_and_bound(N, T, C)
    if n is None:
        n = theorem3_sample_size(N, T, C)
    res = RecoveryRunResult(n, bound, trials_omega, 0, 0, 0, 0, 0, 0)
    for i in range(trials_omega):
        rng = _rng(seed, tag, i)
        draw = FrequencyDraw.random(N, n, rng)
        rep = guaranteed_recovery_check(draw, T, trials_x, trial_seed(seed, tag + "/x", i), tol=tol)
        if rep.certificate_holds:
            res.certified_draws += 1
            res.certified_signals += rep.trials
            res.certified_successes += rep.successes
            res.certified_undecided += rep.undecided
        else:
            res.uncertified_signals += rep.trials
            res.uncertified_successes += rep.successes
        res.rows.append(
            (i, rep.omega_size, rep.certificate_holds, rep.margin, rep.successes, rep.failures, rep.undecided)
        )
    return res


@dataclass
class ModelCompareResult:
    f: int
    tau: float
    T: int
    histogram_rows: list
    summary_rows: list

    def histogram_csv(self) -> str:
        return _csv(["model", "k", "empirical", "exact"], self.histogram_rows)

    def summary_csv(self) -> str:
        return _csv(["model", "param", "mean_size", "exact_mean", "cert_rate"], self.summary_rows)


def run_model_compare(N, n, trials, seed, T=1, tag="ModelCompare") -> ModelCompareResult:
    """Size histograms and indicator-kernel certificate rates for the four calibrated models."""
    f, tau = model_calibration(n, N)
    models = [UniformSubset(N, f), BernoulliSelection(N, tau),
              OccupationRange(N, n), PoissonProcess(N, tau)]
    hist_rows, summary = [], []
    for model in models:
        sizes = np.empty(trials, dtype=np.int64)
        cert = 0
        for i in range(trials):
            omega = sample_omega(model, trial_seed(seed, f"{tag}/{model.kind}", i)).omega
            sizes[i] = len(omega)
            if omega:
                prof = kernel_profile(FrequencyDraw(N, tuple(sorted(omega))))
                cert += certificate_check(prof, T)[0]
        exact = size_distribution(model)
        emp = np.bincount(sizes, minlength=N + 1) / trials
        ex_arr = exact.as_array()
        for k in range(N + 1):
            if emp[k] > 0 or ex_arr[k] > 0:
                hist_rows.append((model.kind, k, float(emp[k]), float(ex_arr[k])))
        (pname, pval), = model.params().items()
        summary.append((model.kind, f"{pname}={pval!r}", float(sizes.mean()), float(exact.mean()), cert / trials))
    return ModelCompareResult(f, tau, T, hist_rows, summary)


def run_dominance_grid(trials=10_000, seed=0, grid=None, workers=1):
    """Tail1 and Tail2 runs over a parameter grid; Tail1 uses M = (N - 1) / 2."""
    grid = grid or DEFAULT_GRID
    rows = []
    for N in grid["N"]:
        for n in grid["n"]:
            for delta in grid["delta"]:
                tag = f"grid/{N}/{n}/{delta!r}"
                r2 = run_tail2(N, n, delta, trials, seed, workers, tag=tag + "/T2")
                r1 = run_tail1((N - 1) // 2, n, delta, trials, seed, workers, tag=tag + "/T1")
                rows.append(("Tail2", N, n, delta, r2))
                rows.append(("Tail1", (N - 1) // 2, n, delta, r1))
    return rows


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    return str(v)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict
    trials: int = 1000
    master_seed: int = 0
    output_path: str = "out"
    workers: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise InvalidParameterError(f"experiment must be one of {EXPERIMENTS}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise InvalidParameterError("trials must be >= 1")
        if self.workers < 1:
            raise InvalidParameterError("workers must be >= 1")
        self.validate()

    _REQUIRED = {
        "Tail1": ("M", "n", "delta"),
        "Tail2": ("N", "n", "delta"),
        "Certificate": ("N", "T", "C"),
        "Recovery": ("N", "T", "C", "trials_x"),
        "ModelCompare": ("N", "n"),
        "PaperTable": (),
    }

    def validate(self):
        p = self.params
        unknown = set(p) - {"N", "n", "M", "delta", "T", "C", "trials_x", "C_values"}
        if unknown:
            raise InvalidParameterError(f"unknown parameter(s): {sorted(unknown)}")
        missing = [k for k in self._REQUIRED[self.experiment] if k not in p]
        if missing:
            raise InvalidParameterError(f"missing parameter(s): {missing}")
        needs_prime = self.experiment in ("Tail2", "Certificate", "Recovery")
        if needs_prime and not (p["N"] >= 5 and is_prime(p["N"])):
            raise InvalidParameterError(f"N must be prime >= 5, got {p['N']}")
        if "delta" in p and not p["delta"] > 0:
            raise InvalidParameterError("delta must be > 0")
        if "C" in p and not p["C"] > 1:
            raise InvalidParameterError("C must be > 1")
        if self.experiment == "ModelCompare" and p["N"] < 2:
            raise InvalidParameterError("N must be >= 2")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {"experiment", "params", "trials", "master_seed", "output_path", "workers"}
        extra = set(d) - known
        if extra:
            raise InvalidParameterError(f"unknown config key(s): {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExperimentOutcome:
    files: dict
    manifest: dict
    dominance_ok: bool


def run_experiment(cfg: ExperimentConfig) -> ExperimentOutcome:
    """Run a configured experiment and render its CSV outputs in memory."""
    p, s, t, w = cfg.params, cfg.master_seed, cfg.trials, cfg.workers
    files, ok, summary = {}, True, {}
    if cfg.experiment in ("Tail1", "Tail2"):
        if cfg.experiment == "Tail2":
            r = run_tail2(p["N"], p["n"], p["delta"], t, s, w)
        else:
            r = run_tail1(p["M"], p["n"], p["delta"], t, s, w)
        thr = _flat_threshold(p["delta"])
        files["trials.csv"] = _csv(
            ["trial_index", "statistic", "failure"],
            [(i, float(v), bool(v >= thr)) for i, v in enumerate(r.statistics)],
        )
        files["summary.csv"] = _csv(
            ["empirical_failure", "stderr", "bound", "nu", "failures", "trials", "dominated"],
            [(r.empirical_failure, r.stderr, r.bound, r.nu, r.failures, r.trials, r.dominated)],
        )
        ok = r.dominated
    elif cfg.experiment == "Certificate":
        r = run_certificate(p["N"], p["T"], p["C"], t, s, w)
        files["trials.csv"] = _csv(
            ["trial_index", "margin", "certified"], [(i, float(m), bool(m > 0)) for i, m in enumerate(r.margins)]
        )
        files["summary.csv"] = _csv(
            ["cert_rate", "stderr", "bound_pred", "n", "nu", "dominated"],
            [(r.cert_rate, r.stderr, r.bound_pred, r.n, r.nu, r.dominated)],
        )
        ok = r.dominated
    elif cfg.experiment == "Recovery":
        r = run_recovery(p["N"], p["T"], p["C"], t, p["trials_x"], s)
        files["trials.csv"] = _csv(
            ["draw_index", "omega_size", "certified", "margin", "successes", "failures", "undecided"], r.rows
        )
        files["summary.csv"] = _csv(
            ["n", "cert_rate", "bound_pred", "certified_signals", "certified_successes",
             "certified_undecided", "uncertified_signals", "uncertified_successes", "implication_holds"],
            [(r.n, r.cert_rate, r.bound_pred, r.certified_signals, r.certified_successes,
              r.certified_undecided, r.uncertified_signals, r.uncertified_successes, r.implication_holds)],
        )
        ok = r.implication_holds
    elif cfg.experiment == "ModelCompare":
        r = run_model_compare(p["N"], p["n"], t, s, T=p.get("T", 1))
        files["histograms.csv"] = r.histogram_csv()
        files["summary.csv"] = r.summary_csv()
    else:
        rows = paper_example_table(p.get("N", 997), p.get("T", 2), p.get("C_values", (2.0, 3.0)))
        files["table.csv"] = paper_table_csv(rows)
    manifest = {
        "config": cfg.to_dict(),
        "package_version": __version__,
        "seed_scheme": "SeedSequence([master_seed, crc32(tag), trial_index])",
        "files": sorted(files),
        "dominance_ok": ok,
    }
    return ExperimentOutcome(files, manifest, ok)


def write_outputs(outcome: ExperimentOutcome, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in outcome.files.items():
        (out / name).write_text(text)
    (out / "manifest.json").write_text(json.dumps(outcome.manifest, indent=2, sort_keys=True) + "\n")
    return out
