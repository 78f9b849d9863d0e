import json
import math

import numpy as np
import pytest
from scipy.integrate import quad

from expsum_cs.errors import InvalidParameterError
from expsum_cs.experiments import (
    ExperimentConfig,
    run_certificate,
    run_experiment,
    run_model_compare,
    run_recovery,
    run_tail1,
    run_tail2,
    trial_seed,
    write_outputs,
)
from expsum_cs.omega_models import OccupationRange, size_distribution


def test_trial_seed_is_pure():
    a = np.random.default_rng(trial_seed(5, "x", 3)).random(4)
    b = np.random.default_rng(trial_seed(5, "x", 3)).random(4)
    c = np.random.default_rng(trial_seed(5, "y", 3)).random(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


class TestTail2:
    def test_unreachable_threshold(self):
        r = run_tail2(11, 6, 1.5, 300, seed=1)
        assert r.empirical_failure == 0 and math.isnan(r.bound)

    def test_single_point(self):
        r = run_tail2(11, 1, 0.5, 200, seed=1)
        assert r.empirical_failure == 1.0

    def test_dominance(self):
        r = run_tail2(31, 60, 0.5, 10_000, seed=3)
        assert r.dominated
        assert r.empirical_failure <= r.bound + 4 * r.stderr

    def test_statistic_range(self):
        r = run_tail2(13, 20, 0.5, 500, seed=2)
        assert np.all((r.statistics >= 0) & (r.statistics <= 1 + 1e-12))

    def test_parallel_identical(self):
        a = run_tail2(31, 40, 0.3, 2_000, seed=8, workers=1)
        b = run_tail2(31, 40, 0.3, 2_000, seed=8, workers=3)
        assert np.array_equal(a.statistics, b.statistics)

    def test_monotone_in_n(self):
        rates = [run_tail2(31, n, 0.3, 4_000, seed=4) for n in (20, 40, 80)]
        for lo, hi in zip(rates, rates[1:]):
            se = math.hypot(lo.stderr, hi.stderr)
            assert hi.empirical_failure <= lo.empirical_failure + 4 * se

    def test_requires_prime(self):
        with pytest.raises(InvalidParameterError):
            run_tail2(9, 10, 0.5, 10, seed=0)


class TestTail1:
    def test_nested_events(self):
        r1 = run_tail1(1, 20, 0.4, 3_000, seed=6)
        r2 = run_tail1(2, 20, 0.4, 3_000, seed=6)
        assert np.all(r1.statistics <= r2.statistics + 1e-15)
        assert r1.empirical_failure <= r2.empirical_failure

    def test_two_point_law(self):
        # |e(x1) + e(x2)| = 2|cos(pi u)| with u = x1 - x2 uniform, so failure has
        # probability P(|cos(pi u)| >= delta) = (2/pi) arccos(delta); check by quadrature too
        delta = 0.99
        exact, _ = quad(lambda u: 1.0 if abs(math.cos(math.pi * u)) >= delta else 0.0, 0, 1,
                        points=[math.acos(delta) / math.pi, 1 - math.acos(delta) / math.pi], limit=200)
        assert exact == pytest.approx(2 / math.pi * math.acos(delta), rel=1e-8)
        r = run_tail1(1, 2, delta, 100_000, seed=12)
        assert abs(r.empirical_failure - exact) <= 4 * math.sqrt(exact * (1 - exact) / 100_000)

    def test_dominance(self):
        for M, n, d in [(1, 20, 0.5), (10, 40, 0.5), (15, 80, 0.3)]:
            assert run_tail1(M, n, d, 3_000, seed=2).dominated


class TestCertificate:
    def test_dominance(self):
        r = run_certificate(31, 1, 2.0, 1_000, seed=1)
        assert r.n == math.ceil(8 * math.log(31))
        assert r.dominated

    def test_degenerate_sparsity(self):
        # T >= N/2: the predicted bound says nothing, so only sanity is checked
        r = run_certificate(11, 6, 1.5, 200, seed=1)
        assert r.bound_pred >= 1 and r.dominated
        assert 0 <= r.cert_rate <= 1


class TestRecovery:
    def test_small_run(self):
        r = run_recovery(31, 2, 2.0, 10, 5, seed=3)
        assert r.implication_holds
        assert r.certified_successes == r.certified_signals - r.certified_undecided

    def test_full_group_forced(self):
        # n large enough that every draw covers Z_11 almost surely
        r = run_recovery(11, 1, 2.0, 5, 4, seed=1, n=400)
        assert r.cert_rate == 1.0 and r.certified_successes == 20


class TestModelCompare:
    def test_n1(self):
        r = run_model_compare(7, 1, 4_000, seed=5)
        assert r.f == 1
        hist = {}
        for model, k, emp, ex in r.histogram_rows:
            hist.setdefault(model, {})[k] = (emp, ex)
        for model, rows in hist.items():
            for k, (emp, ex) in rows.items():
                assert abs(emp - ex) <= 4 * math.sqrt(max(ex * (1 - ex), 1e-12) / 4_000) + 1e-12
        assert hist["UniformSubset"] == {1: (1.0, 1.0)}

    def test_calibrated_means(self):
        r = run_model_compare(31, 20, 4_000, seed=2)
        means = {row[0]: row[2] for row in r.summary_rows}
        occ_var = float(size_distribution(OccupationRange(31, 20)).variance())
        tau = r.tau
        se = math.sqrt(occ_var / 4_000 + tau * (1 - tau) * 31 / 4_000)
        assert abs(means["OccupationRange"] - means["BernoulliSelection"]) <= 4 * se

    def test_csv_headers(self):
        r = run_model_compare(7, 3, 200, seed=0)
        assert r.histogram_csv().startswith("model,k,empirical,exact\n")
        assert r.summary_csv().startswith("model,param,mean_size,exact_mean,cert_rate\n")


class TestConfig:
    def test_reproducible_files(self, tmp_path):
        cfg = ExperimentConfig("Tail2", {"N": 31, "n": 60, "delta": 0.5}, trials=1000, master_seed=1)
        a = run_experiment(cfg)
        b = run_experiment(ExperimentConfig(**{**cfg.to_dict(), "workers": 4}))
        assert a.files == b.files
        out = write_outputs(a, tmp_path / "run")
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["master_seed"] == 1
        assert (out / "trials.csv").read_text() == a.files["trials.csv"]

    @pytest.mark.parametrize("bad", [
        {"experiment": "Tail2", "params": {"N": 4, "n": 10, "delta": 0.5}},
        {"experiment": "Tail2", "params": {"N": 31, "n": 10}},
        {"experiment": "Nope", "params": {}},
        {"experiment": "PaperTable", "params": {}, "trials": 0},
        {"experiment": "PaperTable", "params": {"bogus": 1}},
        {"experiment": "PaperTable", "params": {}, "colour": "red"},
    ])
    def test_rejects(self, bad):
        with pytest.raises(InvalidParameterError):
            ExperimentConfig.from_dict(bad)

    @pytest.mark.parametrize("experiment,params,trials", [
        ("Tail1", {"M": 5, "n": 30, "delta": 0.5}, 200),
        ("Certificate", {"N": 31, "T": 1, "C": 2.0}, 200),
        ("Recovery", {"N": 31, "T": 1, "C": 2.0, "trials_x": 2}, 3),
        ("ModelCompare", {"N": 11, "n": 5}, 100),
        ("PaperTable", {}, 1),
    ])
    def test_every_kind_runs(self, experiment, params, trials):
        out = run_experiment(ExperimentConfig(experiment, params, trials=trials, master_seed=2))
        assert out.files and out.manifest["config"]["experiment"] == experiment
