import math

import numpy as np
import pytest
from scipy import stats

from coevo.citations import (
    Corpus,
    PaperRecord,
    aging_factor,
    allocate_citations,
    citation_weight,
    conservation_check,
    eligible_weights,
    sample_reference_count,
)
from coevo.config import SamplerSpec, SimulationConfig
from coevo.metrics import gini
from coevo.sampling import sample_without_replacement
from coevo.simulation import run_simulation


def paper(pid, month=1, quality=1.0, cites=0):
    return PaperRecord(pid, month, [0], quality, citations_received=cites)


class TestWeight:
    def test_unit_weight(self):
        assert citation_weight(paper(0, month=4), 4, 48.0, 1.0) == 1.0

    def test_aging_anchor(self):
        assert citation_weight(paper(0, month=1), 49, 48.0, 1.0) == math.exp(-1)
        assert aging_factor(np.array([0, 24, 48]), 24.0)[1] == math.exp(-1)

    def test_direct_product(self):
        assert citation_weight(paper(0, quality=2.0, cites=3), 1, 48.0, 1.0) == 8.0

    def test_no_aging(self):
        assert citation_weight(paper(0, month=1), 500, math.inf, 1.0) == 1.0

    def test_future_paper(self):
        with pytest.raises(ValueError):
            citation_weight(paper(0, month=5), 4, 48.0, 1.0)

    def test_uncited_paper_is_reachable(self):
        corpus = Corpus.from_records([paper(i, month=1, quality=0.5) for i in range(5)])
        w = eligible_weights(corpus, None, 200, 12.0, 1.0)
        assert np.all(w > 0)


class TestAllocate:
    def test_single_target(self, rng):
        corpus = Corpus.from_records([paper(0), paper(1)])
        assert allocate_citations(corpus[1], corpus, 1, 1, 48.0, 1.0, rng) == [0]
        assert corpus[0].citations_received == 1
        assert corpus[0].citation_months == [1]
        assert corpus.cites.tolist() == [1, 0]

    def test_clamped_to_eligible(self, rng):
        corpus = Corpus.from_records([paper(i) for i in range(4)])
        refs = allocate_citations(corpus[3], corpus, 5, 1, 48.0, 1.0, rng)
        assert sorted(refs) == [0, 1, 2]
        assert conservation_check(corpus)

    def test_equal_weights_split_evenly(self):
        rng = np.random.default_rng(99)
        hits = 0
        for _ in range(100_000):
            w = np.array([1.0, 1.0])
            hits += sample_without_replacement(w, 1, rng)[0] == 0
        assert hits / 100_000 == pytest.approx(0.5, abs=0.01)

    def test_first_pick_follows_kernel(self):
        rng = np.random.default_rng(5)
        first = []
        for _ in range(20_000):
            corpus = Corpus.from_records([paper(0, cites=1), paper(1), paper(2), paper(3, month=2)])
            first.append(allocate_citations(corpus[3], corpus, 2, 2, math.inf, 1.0, rng)[0])
        assert np.mean(np.array(first) == 0) == pytest.approx(0.5, abs=0.01)

    def test_future_papers_and_self_excluded(self, rng):
        corpus = Corpus.from_records([paper(0, month=1), paper(1, month=2), paper(2, month=3)])
        w = eligible_weights(corpus, 1, 2, 48.0, 1.0)
        assert w[1] == 0 and w[2] == 0 and w[0] > 0

    def test_same_issue_toggle(self, rng):
        corpus = Corpus.from_records([paper(0, month=1), paper(1, month=2), paper(2, month=2)])
        on = eligible_weights(corpus, 2, 2, 48.0, 1.0, same_issue=True)
        off = eligible_weights(corpus, 2, 2, 48.0, 1.0, same_issue=False)
        assert on[1] > 0 and off[1] == 0 and off[0] > 0

    def test_negative_count(self, rng):
        corpus = Corpus.from_records([paper(0)])
        with pytest.raises(ValueError):
            allocate_citations(corpus[0], corpus, -1, 1, 48.0, 1.0, rng)


class TestConservation:
    def test_empty(self):
        assert conservation_check([])

    def test_dangling_reference(self):
        a = paper(0)
        a.references.append(7)
        assert not conservation_check([a])

    def test_mismatch(self):
        a, b = paper(0), paper(1, cites=1)
        assert not conservation_check([a, b])
        a.references.append(1)
        assert conservation_check([a, b])

    def test_every_month_of_default_run(self, default_run):
        assert default_run.n_papers == 2496
        for month, refs, cites in default_run.conservation_log:
            assert refs == cites, month
        assert conservation_check(default_run.corpus)

    def test_reference_lists_are_clean(self, default_run):
        months = default_run.corpus.months
        for p in default_run.corpus:
            assert p.paper_id not in p.references
            assert len(set(p.references)) == len(p.references)
            assert all(months[r] <= p.month for r in p.references)
            assert sorted(p.citation_months) == p.citation_months

    def test_first_issue_cites_only_itself(self, default_run):
        first = [p for p in default_run.corpus if p.month == 1]
        assert all(months == 1 for p in first for months in default_run.corpus.months[p.references])


def test_reference_count_samplers(rng):
    assert {sample_reference_count(SamplerSpec.empirical([{0: 1.0}]), 1, 1, rng) for _ in range(50)} == {0}
    draws = [sample_reference_count(SamplerSpec.parametric(10.0, family="Poisson"), 1, 1, rng) for _ in range(100_000)]
    assert np.mean(draws) == pytest.approx(10.0, rel=0.01)


def grow(kernel, seed, n=200, refs=5):
    rng = np.random.default_rng(seed)
    corpus = Corpus(n)
    for pid in range(n):
        corpus.add(PaperRecord(pid, pid + 1, [0], 1.0))
        allocate_citations(corpus[pid], corpus, refs, pid + 1, math.inf, 1.0, rng, kernel=kernel)
    return corpus.cites.copy()


def test_cumulative_advantage_is_heavier_than_uniform():
    ca = [gini(grow("minimal", s)) for s in range(5)]
    uni = [gini(grow("uniform", s)) for s in range(5)]
    assert min(ca) > max(uni)
    _, pvalue = stats.ttest_ind(ca, uni)
    assert pvalue < 0.01


def test_uniform_kernel_run_conserves():
    cfg = SimulationConfig(years=3, base_papers_per_issue=3, citation_kernel="uniform", aging_lifetime=math.inf)
    result = run_simulation(cfg, seed=1)
    assert conservation_check(result.corpus)
