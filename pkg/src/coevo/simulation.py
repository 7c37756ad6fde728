"""End-to-end simulation of one virtual journal.

Each month publishes one issue in two passes. First every paper of the
issue gets its team (size draw, slot filling, matrix update, quality). Then
every paper draws its reference count and allocates its references over the
corpus, which at that point includes the whole issue, so papers of one
issue may cite each other regardless of their order within it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from coevo import metrics
from coevo.citations import Corpus, PaperRecord, allocate_citations, conservation_check, sample_reference_count
from coevo.coauthor import record_team
from coevo.config import SimulationConfig, build_schedule
from coevo.errors import InvariantViolation
from coevo.ledger import Ledger
from coevo.teams import AuthorRegistry, assemble_team, sample_team_size

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    config: SimulationConfig
    seed: int
    corpus: Corpus
    registry: AuthorRegistry
    ledger: Ledger
    newcomers: np.ndarray  # per paper
    conservation_log: list[tuple[int, int, int]]  # (month, total refs, total cites)
    impact_factor: dict[int, float] = field(default_factory=dict)
    average_h: dict[int, float] = field(default_factory=dict)
    distributions: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def n_papers(self) -> int:
        return len(self.corpus)

    @property
    def n_authors(self) -> int:
        return len(self.registry)

    @property
    def final_year(self) -> int:
        return self.config.years


def run_simulation(config: SimulationConfig, seed: int | None = None) -> RunResult:
    """Run the full schedule; ``seed`` overrides ``config.seed``."""
    seed = config.seed if seed is None else int(seed)
    config = config.replace(seed=seed)
    rng = np.random.default_rng(seed)
    schedule = build_schedule(config)
    registry = AuthorRegistry(capacity=schedule.total_papers)
    corpus = Corpus(capacity=schedule.total_papers)
    newcomers: list[int] = []
    conservation: list[tuple[int, int, int]] = []
    total_refs = 0

    for month, n_papers in schedule.months:
        year = schedule.year_of(month)
        issue: list[PaperRecord] = []
        for _ in range(n_papers):
            pid = len(corpus)
            m = sample_team_size(config.team_size_sampler, year, config.years, rng)
            team = assemble_team(
                m,
                config.newcomer_prob,
                registry,
                month,
                rng,
                nu=config.pa_exponent,
                k0=config.initial_connectivity,
                q_mu=config.q_mu,
                q_sigma=config.q_sigma,
                noise_halfwidth=config.noise_halfwidth,
                paper_id=pid,
            )
            record_team(registry.matrix, team)
            record = PaperRecord(pid, month, team.member_ids, team.quality)
            corpus.add(record)
            issue.append(record)
            newcomers.append(team.n_newcomers)
        for record in issue:
            r = sample_reference_count(config.reference_sampler, year, config.years, rng)
            made = allocate_citations(
                record,
                corpus,
                r,
                month,
                config.aging_lifetime,
                config.initial_attractiveness,
                rng,
                same_issue=config.same_issue_citations,
                kernel=config.citation_kernel,
            )
            total_refs += len(made)
        total_cites = int(corpus.cites.sum())
        conservation.append((month, total_refs, total_cites))
        if total_refs != total_cites:
            raise InvariantViolation(f"month {month}: {total_refs} references vs {total_cites} citations")

    if not conservation_check(corpus):
        raise InvariantViolation("citation ledger does not balance")
    if not registry.matrix.is_consistent():
        raise InvariantViolation("collaboration matrix is inconsistent")

    ledger = Ledger.from_simulation(corpus, registry, config.issues_per_year)
    result = RunResult(
        config=config,
        seed=seed,
        corpus=corpus,
        registry=registry,
        ledger=ledger,
        newcomers=np.array(newcomers, dtype=np.int64),
        conservation_log=conservation,
    )
    result.impact_factor = metrics.impact_factor_series(ledger)
    result.average_h = metrics.average_h_series(ledger, config.include_zero_h)
    result.distributions = metrics.final_distributions(ledger)
    log.debug("seed %d: %d papers, %d authors", seed, result.n_papers, result.n_authors)
    return result
