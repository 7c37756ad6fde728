import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from coevo.config import SamplerSpec, SimulationConfig
from coevo.errors import PoolExhausted
from coevo.simulation import run_simulation
from coevo.teams import (
    AuthorRegistry,
    assemble_team,
    assign_q_factor,
    expected_newcomers,
    paper_quality,
    sample_team_size,
    select_incumbent,
)


def frequencies(counts, n, rng, k0=1.0, nu=1.0, exclude=()):
    picks = [select_incumbent(np.array(counts), exclude, nu, k0, rng) for _ in range(n)]
    return np.bincount(picks, minlength=len(counts))


class TestSelectIncumbent:
    def test_single_eligible(self, rng):
        assert {select_incumbent(np.array([4, 7]), [0], 1.0, 1.0, rng) for _ in range(200)} == {1}

    def test_two_incumbents_follow_counts(self, rng):
        observed = frequencies([1, 3], 100_000, rng)
        _, pvalue = stats.chisquare(observed, [25_000, 75_000])
        assert pvalue > 0.01

    def test_zero_collaboration_sentinel(self, rng):
        observed = frequencies([0, 2, 6], 100_000, rng) / 100_000
        np.testing.assert_allclose(observed, [1 / 9, 2 / 9, 6 / 9], atol=0.01)

    def test_uniform_when_counts_equal(self, rng):
        observed = frequencies([5] * 8, 80_000, rng)
        _, pvalue = stats.chisquare(observed)
        assert pvalue > 0.01

    def test_exponent_applies_to_counts(self, rng):
        observed = frequencies([1, 4], 100_000, rng, nu=0.5) / 100_000
        np.testing.assert_allclose(observed, [1 / 3, 2 / 3], atol=0.01)

    def test_pool_exhausted(self, rng):
        with pytest.raises(PoolExhausted):
            select_incumbent(np.array([1, 2]), [0, 1], 1.0, 1.0, rng)
        with pytest.raises(PoolExhausted):
            select_incumbent(AuthorRegistry(), [], 1.0, 1.0, rng)


def test_expected_newcomers():
    assert expected_newcomers(3.54, 0.192) == pytest.approx(0.680, abs=5e-4)
    assert expected_newcomers(7.0, 0.0) == 0.0
    assert expected_newcomers(1.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        expected_newcomers(2.0, 1.5)


class TestQFactor:
    def test_degenerate_limit(self, rng):
        assert assign_q_factor(0.93, 1e-12, rng) == pytest.approx(math.exp(0.93), rel=1e-9)

    def test_median_and_mean(self, rng):
        q = np.array([assign_q_factor(0.93, 0.46, rng) for _ in range(100_000)])
        assert np.median(q) == pytest.approx(math.exp(0.93), rel=0.02)
        assert q.mean() == pytest.approx(math.exp(0.93 + 0.46**2 / 2), rel=0.02)
        assert q.mean() == pytest.approx(2.820, rel=0.02)
        assert q.min() > 0


class TestPaperQuality:
    def test_noise_free_takes_the_best(self, rng):
        assert paper_quality([2.0, 1.0], 0.0, rng) == 2.0

    def test_uniform_noise(self, rng):
        eta = np.array([paper_quality([1.0], 0.1, rng) for _ in range(100_000)])
        assert eta.min() >= 0.9 and eta.max() <= 1.1
        assert eta.mean() == pytest.approx(1.0, abs=0.005)

    def test_solo_teams_reproduce_q(self):
        cfg = SimulationConfig(
            years=2,
            base_papers_per_issue=3,
            team_size_sampler=SamplerSpec.parametric(1.0),
            noise_halfwidth=0.0,
        )
        result = run_simulation(cfg, seed=3)
        q = result.registry.q_factors()
        for paper in result.corpus:
            assert paper.quality == q[paper.team[0]]

    def test_empty_team(self, rng):
        with pytest.raises(ValueError):
            paper_quality([], 0.1, rng)


class TestAssembleTeam:
    def test_empty_registry_gives_newcomers(self, rng):
        registry = AuthorRegistry()
        team = assemble_team(3, 0.0, registry, 1, rng)
        assert team.newcomer_flags == [True, True, True]
        assert len(registry) == 3

    def test_all_newcomers_at_p_one(self, rng):
        registry = AuthorRegistry()
        for paper in range(20):
            before = len(registry)
            team = assemble_team(4, 1.0, registry, 1, rng, paper_id=paper)
            assert team.n_newcomers == 4
            assert len(registry) == before + 4

    def test_paper_ids_recorded(self, rng):
        registry = AuthorRegistry()
        team = assemble_team(2, 1.0, registry, 5, rng, paper_id=11)
        for a in team.member_ids:
            assert registry[a].paper_ids == [11]
            assert registry[a].first_paper_month == 5

    def test_newcomer_count_is_binomial(self, rng):
        m, p = 4, 0.3
        registry = AuthorRegistry()
        for _ in range(50):
            registry.register(1.0, 0)
        counts = np.array([assemble_team(m, p, registry, 1, rng).n_newcomers for _ in range(20_000)])
        assert counts.mean() == pytest.approx(m * p, rel=0.02)
        assert counts.var() == pytest.approx(m * p * (1 - p), rel=0.05)

    def test_q_factor_is_immutable(self, rng):
        registry = AuthorRegistry()
        aid = registry.register(2.5, 1)
        with pytest.raises(AttributeError):
            registry[aid].q_factor = 9.0
        assemble_team(3, 0.0, registry, 2, rng)
        assert registry[aid].q_factor == 2.5

    def test_unknown_author(self):
        with pytest.raises(KeyError):
            AuthorRegistry()[0]

    @settings(max_examples=60, deadline=None)
    @given(
        sizes=st.lists(st.integers(1, 8), min_size=1, max_size=25),
        p=st.floats(0, 1),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_members_distinct(self, sizes, p, seed):
        rng = np.random.default_rng(seed)
        registry = AuthorRegistry()
        for m in sizes:
            team = assemble_team(m, p, registry, 1, rng)
            assert len(team.member_ids) == m == len(set(team.member_ids))
            assert all(registry[a].q_factor > 0 for a in team.member_ids)
            assert team.quality > 0


def test_sample_team_size_histogram(rng):
    sampler = SamplerSpec.empirical([{1: 0.5, 2: 0.5}, {3: 1.0}])
    first = [sample_team_size(sampler, 1, 2, rng) for _ in range(100_000)]
    assert set(first) == {1, 2}
    assert np.mean(first) == pytest.approx(1.5, abs=0.02)
    assert {sample_team_size(sampler, 2, 2, rng) for _ in range(50)} == {3}


@pytest.mark.parametrize("m", [1.1, 1.6, 2.6, 5.2, 10.1])
def test_sweep_team_means_supported(m, rng):
    sampler = SamplerSpec.parametric(m)
    draws = [sample_team_size(sampler, 1, 13, rng) for _ in range(40_000)]
    assert min(draws) >= 1
    assert np.mean(draws) == pytest.approx(m, rel=0.03)


def test_default_run_newcomer_rate():
    rates = [run_simulation(SimulationConfig(), seed=s).newcomers.mean() for s in range(10)]
    assert np.mean(rates) == pytest.approx(0.68, rel=0.02)
