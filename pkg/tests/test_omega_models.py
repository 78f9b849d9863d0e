import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from expsum_cs.errors import InvalidParameterError
from expsum_cs.omega_models import (
    BernoulliSelection,
    OccupationRange,
    PoissonProcess,
    UniformSubset,
    expected_occupied,
    model_calibration,
    sample_omega,
    size_distribution,
    stirling2,
    surjections,
)
from oracles import occupancy_enumeration


def all_models(N):
    return [UniformSubset(N, 2), BernoulliSelection(N, 0.3), OccupationRange(N, 3), PoissonProcess(N, 0.4)]


def test_stirling_table():
    # rows of the Stirling triangle, n = 0..5
    expected = {
        (0, 0): 1, (1, 1): 1, (2, 1): 1, (2, 2): 1, (3, 2): 3, (4, 2): 7, (4, 3): 6,
        (5, 2): 15, (5, 3): 25, (5, 4): 10, (3, 0): 0, (2, 3): 0,
    }
    for (n, k), v in expected.items():
        assert stirling2(n, k) == v
    assert surjections(4, 3) == 36


def test_surjections_brute():
    for n in range(6):
        for k in range(5):
            brute = sum(1 for f in itertools.product(range(k), repeat=n) if len(set(f)) == k)
            assert surjections(n, k) == brute


class TestSampling:
    def test_full_uniform_subset(self):
        for s in range(20):
            assert sample_omega(UniformSubset(9, 9), s).omega == frozenset(range(9))

    def test_single_draw(self):
        hits = Counter()
        for s in range(5000):
            smp = sample_omega(OccupationRange(5, 1), s)
            assert len(smp.omega) == 1 and smp.draw.n == 1
            hits[next(iter(smp.omega))] += 1
        assert stats.chisquare(list(hits.values())).pvalue > 1e-4

    def test_occupation_returns_draw(self):
        smp = sample_omega(OccupationRange(31, 20), 4)
        assert smp.draw.n == 20 and smp.omega == smp.draw.range()
        assert sample_omega(UniformSubset(31, 5), 4).draw is None

    @pytest.mark.parametrize("model", all_models(11), ids=lambda m: m.kind)
    def test_reproducible(self, model):
        a = [sample_omega(model, s) for s in range(30)]
        b = [sample_omega(model, s) for s in range(30)]
        assert a == b
        assert len({x.omega for x in a}) > 1

    def test_bernoulli_marginals_and_independence(self):
        N, trials = 5, 100_000
        member = np.zeros((trials, N), dtype=bool)
        for s in range(trials):
            for w in sample_omega(BernoulliSelection(N, 0.5), s).omega:
                member[s, w] = True
        p = member.mean(axis=0)
        assert np.all(np.abs(p - 0.5) <= 0.006)
        corr = np.corrcoef(member.T.astype(float))
        se = 1 / math.sqrt(trials)
        off = corr[~np.eye(N, dtype=bool)]
        assert np.all(np.abs(off) <= 4 * se)

    @pytest.mark.parametrize("model", all_models(6), ids=lambda m: m.kind)
    def test_exchangeable(self, model):
        N, trials = model.modulus, 20_000
        hits = np.zeros(N)
        for s in range(trials):
            for w in sample_omega(model, s).omega:
                hits[w] += 1
        p = hits / trials
        pbar = p.mean()
        se = math.sqrt(max(pbar * (1 - pbar), 1e-12) / trials)
        assert np.all(np.abs(p - pbar) <= 4 * se * math.sqrt(2))

    @pytest.mark.parametrize("model", [BernoulliSelection(5, 0.5), OccupationRange(5, 3), PoissonProcess(5, 0.5),
                                       UniformSubset(5, 2)], ids=lambda m: m.kind)
    def test_conditionally_uniform(self, model):
        by_size = {}
        for s in range(30_000):
            om = sample_omega(model, s).omega
            by_size.setdefault(len(om), Counter())[om] += 1
        for k, ctr in by_size.items():
            total = sum(ctr.values())
            if total < 200:
                continue
            subsets = [frozenset(c) for c in itertools.combinations(range(5), k)]
            obs = [ctr.get(S, 0) for S in subsets]
            assert sum(obs) == total
            if len(subsets) > 1:
                assert stats.chisquare(obs).pvalue > 1e-4, (k, obs)


class TestSizeDistribution:
    def test_occupation_small(self):
        d = size_distribution(OccupationRange(5, 2))
        assert d.pmf == {1: Fraction(1, 5), 2: Fraction(4, 5)}

    def test_single_draw_point_mass(self):
        for N in (2, 7, 40):
            assert size_distribution(OccupationRange(N, 1)).pmf == {1: 1}

    @pytest.mark.parametrize("N", range(2, 7))
    def test_occupation_matches_enumeration(self, N):
        for n in range(1, 7):
            d = size_distribution(OccupationRange(N, n))
            assert d.pmf == occupancy_enumeration(N, n)
            assert d.total() == 1
            assert set(d.support) <= set(range(1, min(n, N) + 1))

    def test_bernoulli_moments(self):
        for N, tau in [(10, 0.3), (31, 0.25), (7, 0.5)]:
            d = size_distribution(BernoulliSelection(N, tau))
            t = Fraction(tau)
            assert d.total() == 1
            assert d.mean() == t * N
            assert d.variance() == t * (1 - t) * N

    def test_uniform_point_mass(self):
        assert size_distribution(UniformSubset(10, 4)).pmf == {4: 1}

    def test_poisson_truncated(self):
        d = size_distribution(PoissonProcess(20, 0.3))
        assert abs(d.total() - 1) < 1e-12
        assert d.support[-1] <= 20
        assert d.mean() == pytest.approx(6.0, rel=1e-3)

    def test_csv(self):
        text = size_distribution(OccupationRange(5, 2)).to_csv()
        assert text.splitlines() == ["k,probability", "1,0.2", "2,0.8"]

    @pytest.mark.parametrize("model", [OccupationRange(7, 7), OccupationRange(4, 6), OccupationRange(6, 2),
                                       BernoulliSelection(7, 0.4), PoissonProcess(7, 0.5), UniformSubset(7, 3)],
                             ids=lambda m: f"{m.kind}-{m.params()}")
    def test_histogram_matches_exact(self, model):
        trials = 30_000
        sizes = np.array([len(sample_omega(model, s).omega) for s in range(trials)])
        emp = np.bincount(sizes, minlength=model.modulus + 1) / trials
        exact = size_distribution(model).as_array()
        se = np.sqrt(exact * (1 - exact) / trials)
        assert np.all(np.abs(emp - exact) <= 4 * se + 1e-12)


class TestCalibration:
    def test_single(self):
        for N in (2, 5, 100):
            f, tau = model_calibration(1, N)
            assert f == 1 and tau == pytest.approx(1 / N)

    def test_small_example(self):
        assert expected_occupied(2, 5) == Fraction(9, 5)
        f, tau = model_calibration(2, 5)
        assert f == 2 and tau == pytest.approx(0.36)
        d = size_distribution(OccupationRange(5, 2))
        assert d.mean() == Fraction(9, 5)

    def test_saturation(self):
        f, tau = model_calibration(2000, 10)
        assert f == 10 and tau == pytest.approx(1.0, abs=1e-12)

    def test_mean_at_most_n(self):
        for N in range(2, 15):
            for n in range(1, 15):
                m = expected_occupied(n, N)
                assert m == size_distribution(OccupationRange(N, n)).mean()
                assert m <= n
                assert (m == n) == (n == 1)

    def test_invalid(self):
        with pytest.raises(InvalidParameterError):
            model_calibration(0, 5)


@pytest.mark.parametrize(
    "cls,kw",
    [(UniformSubset, {"f": 6}), (BernoulliSelection, {"tau": 1.0}), (OccupationRange, {"n": 0}),
     (PoissonProcess, {"tau": 0.0})],
)
def test_model_validation(cls, kw):
    with pytest.raises(InvalidParameterError):
        cls(5, **kw)


def test_sample_json():
    j = sample_omega(OccupationRange(7, 4), 1).to_json()
    assert set(j) == {"omega", "draw"} and len(j["draw"]) == 4
