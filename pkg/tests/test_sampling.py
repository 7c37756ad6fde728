import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from coevo.config import SamplerSpec
from coevo.sampling import _power_law_table, draw_count, sample_without_replacement, weighted_index


def sequence_probabilities(weights, r):
    """Exact probability of every ordered outcome of r successive draws with removal."""
    n = len(weights)
    positive = [i for i in range(n) if weights[i] > 0]
    out = {}
    for seq in itertools.permutations(positive, min(r, len(positive))):
        prob, remaining = 1.0, float(sum(weights))
        for i in seq:
            prob *= weights[i] / remaining
            remaining -= weights[i]
        out[seq] = prob
    return out


@pytest.mark.parametrize(
    "weights,r",
    [
        ([1.0, 1.0], 1),
        ([1.0, 2.0, 3.0], 2),
        ([0.5, 4.0, 1.0, 2.5], 3),
        ([5.0, 1.0, 1.0, 0.0, 2.0, 1.0], 2),
        ([1.0, 3.0, 0.2, 0.7, 2.0, 1.1], 6),
    ],
)
def test_without_replacement_matches_enumeration(weights, r):
    exact = sequence_probabilities(weights, r)
    assert sum(exact.values()) == pytest.approx(1.0)
    rng = np.random.default_rng(2024)
    trials = 40_000
    seen = Counter(tuple(sample_without_replacement(np.array(weights), r, rng)) for _ in range(trials))
    assert set(seen) <= set(exact)
    outcomes = sorted(exact)
    observed = np.array([seen.get(o, 0) for o in outcomes])
    expected = np.array([exact[o] * trials for o in outcomes])
    if len(outcomes) > 1:
        _, pvalue = stats.chisquare(observed, expected)
        assert pvalue > 0.001


def test_without_replacement_clamps_to_positive_mass(rng):
    chosen = sample_without_replacement(np.array([1.0, 0.0, 2.0]), 5, rng)
    assert sorted(chosen) == [0, 2]


def test_without_replacement_zero_requests(rng):
    assert sample_without_replacement(np.array([1.0, 2.0]), 0, rng) == []


@settings(max_examples=200, deadline=None)
@given(
    weights=st.lists(st.floats(0, 100, allow_nan=False), min_size=1, max_size=30),
    r=st.integers(0, 40),
    seed=st.integers(0, 2**32 - 1),
)
def test_without_replacement_distinct_and_positive(weights, r, seed):
    w = np.array(weights)
    chosen = sample_without_replacement(w, r, np.random.default_rng(seed))
    assert len(chosen) == len(set(chosen)) == min(r, int(np.count_nonzero(w > 0)))
    assert all(w[i] > 0 for i in chosen)


def test_weighted_index_never_picks_zero_weight(rng):
    w = np.array([0.0, 1e-300, 0.0, 1.0, 0.0])
    assert {weighted_index(w, rng) for _ in range(2000)} <= {1, 3}


def test_two_point_histogram_mean(rng):
    sampler = SamplerSpec.empirical([{1: 0.5, 2: 0.5}])
    draws = np.array([draw_count(sampler, 1, 1, rng, minimum=1) for _ in range(100_000)])
    assert set(np.unique(draws)) == {1, 2}
    assert draws.mean() == pytest.approx(1.5, abs=0.02)


def test_point_mass_histogram(rng):
    sampler = SamplerSpec.empirical([{0: 1.0}])
    assert {draw_count(sampler, 1, 1, rng) for _ in range(100)} == {0}


def pmf_of(family, offset, cap=1000):
    """Exact pmf over offsets 0..cap for a parametric family."""
    j = np.arange(cap + 1)
    if family == "ShiftedGeometric":
        return stats.geom(1 / (offset + 1)).pmf(j + 1)
    if family == "Poisson":
        return stats.poisson(offset).pmf(j)
    cdf = _power_law_table(round(offset, 9), cap)
    return np.diff(np.r_[0.0, cdf])


@pytest.mark.parametrize("family", ["ShiftedGeometric", "Poisson", "DiscretePowerLawTruncated"])
@pytest.mark.parametrize("mean,minimum", [(10.0, 0), (3.54, 1), (1.1, 1)])
def test_parametric_families_hit_the_mean(family, mean, minimum, rng):
    pmf = pmf_of(family, mean - minimum, 1000 - minimum)
    j = np.arange(pmf.size)
    exact_mean = minimum + float(np.dot(pmf, j))
    assert exact_mean == pytest.approx(mean, rel=1e-6)
    sd = float(np.sqrt(np.dot(pmf, (j + minimum - exact_mean) ** 2)))

    sampler = SamplerSpec.parametric(mean, family=family)
    n = 100_000
    draws = np.array([draw_count(sampler, 1, 13, rng, minimum=minimum) for _ in range(n)])
    assert draws.min() >= minimum
    assert abs(draws.mean() - mean) < 4 * sd / np.sqrt(n)


def test_poisson_reference_mean(rng):
    sampler = SamplerSpec.parametric(10.0, family="Poisson")
    draws = [draw_count(sampler, 5, 13, rng) for _ in range(100_000)]
    assert np.mean(draws) == pytest.approx(10.0, rel=0.01)


def test_mean_at_minimum_is_degenerate(rng):
    sampler = SamplerSpec.parametric(1.0)
    assert {draw_count(sampler, 1, 1, rng, minimum=1) for _ in range(100)} == {1}
