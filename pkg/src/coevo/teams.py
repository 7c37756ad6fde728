"""Team assembly: team sizes, newcomer/incumbent choice, Q-factors, quality.

Each team slot is independently a newcomer with probability ``p``. An
incumbent slot picks among registered authors with weight ``k_i ** nu``,
where ``k_i`` is the accumulated number of collaborations and authors with
no collaborations weigh ``k0 ** nu``. When every incumbent is already on the
team the slot falls back to a newcomer, so team sizes are always exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from coevo.coauthor import CollaborationMatrix
from coevo.config import SamplerSpec
from coevo.errors import PoolExhausted
from coevo.sampling import draw_count, weighted_index


@dataclass
class AuthorRecord:
    author_id: int
    q_factor: float
    first_paper_month: int
    paper_ids: list[int] = field(default_factory=list)

    def __setattr__(self, name, value):
        if name == "q_factor" and "q_factor" in self.__dict__:
            raise AttributeError("q_factor is fixed at first publication")
        super().__setattr__(name, value)


@dataclass
class TeamDraft:
    member_ids: list[int]
    newcomer_flags: list[bool]
    quality: float = float("nan")

    @property
    def n_newcomers(self) -> int:
        return sum(self.newcomer_flags)


class AuthorRegistry:
    """All registered authors plus their collaboration matrix.

    ``collaboration_count(i)`` is read from the matrix row sums, so it can
    never drift from the matrix.
    """

    def __init__(self, capacity: int = 1024) -> None:
        self.authors: list[AuthorRecord] = []
        self.matrix = CollaborationMatrix(capacity)

    def __len__(self) -> int:
        return len(self.authors)

    def __getitem__(self, author_id: int) -> AuthorRecord:
        if not 0 <= author_id < len(self.authors):
            raise KeyError(f"unknown author {author_id}")
        return self.authors[author_id]

    def __iter__(self):
        return iter(self.authors)

    def register(self, q_factor: float, month: int) -> int:
        aid = self.matrix.add_author()
        self.authors.append(AuthorRecord(aid, float(q_factor), month))
        return aid

    def collaboration_count(self, author_id: int) -> int:
        return self.matrix.total(author_id)

    def collaboration_counts(self) -> np.ndarray:
        return self.matrix.totals

    def q_factors(self) -> np.ndarray:
        return np.array([a.q_factor for a in self.authors])


def sample_team_size(sampler: SamplerSpec, year: int, years: int, rng: np.random.Generator) -> int:
    return draw_count(sampler, year, years, rng, minimum=1)


def expected_newcomers(m: float, p: float) -> float:
    """Expected newcomers per paper for mean team size ``m``."""
    if m < 0 or not 0 <= p <= 1:
        raise ValueError("need m >= 0 and p in [0, 1]")
    return m * p


def incumbent_weights(counts: np.ndarray, nu: float, k0: float) -> np.ndarray:
    w = np.where(counts > 0, counts, k0).astype(float)
    if nu != 1.0:
        w **= nu
    return w


def select_incumbent(
    incumbents: AuthorRegistry | Sequence[float] | np.ndarray,
    exclude: Iterable[int],
    nu: float,
    k0: float,
    rng: np.random.Generator,
) -> int:
    """Preferential choice of one incumbent not in ``exclude``.

    ``incumbents`` is a registry or an array of collaboration counts indexed
    by author id. Raises :class:`PoolExhausted` when nobody is eligible.
    """
    if isinstance(incumbents, AuthorRegistry):
        counts = incumbents.collaboration_counts()
    else:
        counts = np.asarray(incumbents)
    if counts.size == 0:
        raise PoolExhausted("no incumbents registered")
    w = incumbent_weights(counts, nu, k0)
    excluded = [i for i in exclude if 0 <= i < w.size]
    if excluded:
        w[excluded] = 0.0
    if not w.any():
        raise PoolExhausted("every incumbent is already on the team")
    return weighted_index(w, rng)


def assign_q_factor(mu: float, sigma: float, rng: np.random.Generator) -> float:
    return float(np.exp(rng.normal(mu, sigma)))


def paper_quality(q_factors: Sequence[float], noise_halfwidth: float, rng: np.random.Generator) -> float:
    """Best team Q-factor times a uniform multiplicative noise factor."""
    if len(q_factors) == 0:
        raise ValueError("empty team")
    best = max(q_factors)
    if noise_halfwidth == 0:
        return float(best)
    delta = rng.uniform(1.0 - noise_halfwidth, 1.0 + noise_halfwidth)
    return float(delta * best)


def assemble_team(
    m: int,
    p: float,
    registry: AuthorRegistry,
    month: int,
    rng: np.random.Generator,
    *,
    nu: float = 1.0,
    k0: float = 1.0,
    q_mu: float = 0.93,
    q_sigma: float = 0.46,
    noise_halfwidth: float = 0.1,
    paper_id: int | None = None,
) -> TeamDraft:
    """Fill ``m`` distinct slots and compute the paper quality.

    Random stream order per slot: one uniform for the newcomer coin, then
    either one uniform (incumbent pick) or one normal (new Q-factor). The
    quality noise is drawn last. With ``paper_id`` set, the paper is
    appended to each member's record.
    """
    if m < 1:
        raise ValueError("team size must be >= 1")
    members: list[int] = []
    flags: list[bool] = []
    for _ in range(m):
        newcomer = rng.random() < p
        if not newcomer:
            try:
                aid = select_incumbent(registry, members, nu, k0, rng)
            except PoolExhausted:
                newcomer = True
        if newcomer:
            aid = registry.register(assign_q_factor(q_mu, q_sigma, rng), month)
        members.append(aid)
        flags.append(newcomer)
    quality = paper_quality([registry[a].q_factor for a in members], noise_halfwidth, rng)
    if paper_id is not None:
        for a in members:
            registry[a].paper_ids.append(paper_id)
    return TeamDraft(members, flags, quality)
