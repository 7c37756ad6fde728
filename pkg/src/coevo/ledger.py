"""Columnar publication/citation ledger consumed by the metrics module.

Simulated runs and ingested empirical data are both reduced to this shape,
so every indicator is computed by one code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from coevo.citations import Corpus
from coevo.teams import AuthorRegistry


@dataclass
class Ledger:
    """Papers, authorships and dated citation events.

    ``paper_month`` is 1-based; year ``y`` covers months
    ``(y - 1) * months_per_year + 1 .. y * months_per_year``. Author ids are
    dense ``0 .. n_authors - 1``. ``cite_month`` is the month the citation
    arrived (the citing paper's publication month).
    """

    paper_month: np.ndarray
    paper_teams: list[list[int]]
    cite_src: np.ndarray
    cite_dst: np.ndarray
    cite_month: np.ndarray
    n_authors: int
    months_per_year: int = 12
    paper_quality: np.ndarray | None = None
    author_labels: list[str] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.paper_month = np.asarray(self.paper_month, dtype=np.int64)
        self.cite_src = np.asarray(self.cite_src, dtype=np.int64)
        self.cite_dst = np.asarray(self.cite_dst, dtype=np.int64)
        self.cite_month = np.asarray(self.cite_month, dtype=np.int64)

    @property
    def n_papers(self) -> int:
        return int(self.paper_month.size)

    def year_of(self, months: np.ndarray | int):
        return (np.asarray(months) - 1) // self.months_per_year + 1

    @cached_property
    def paper_year(self) -> np.ndarray:
        return self.year_of(self.paper_month)

    @cached_property
    def n_years(self) -> int:
        last = max(self.paper_month.max(initial=0), self.cite_month.max(initial=0))
        return int(self.year_of(last)) if last > 0 else 0

    @cached_property
    def n_refs(self) -> np.ndarray:
        return np.bincount(self.cite_src, minlength=self.n_papers)

    @cached_property
    def n_cites(self) -> np.ndarray:
        return np.bincount(self.cite_dst, minlength=self.n_papers)

    @cached_property
    def team_sizes(self) -> np.ndarray:
        return np.array([len(t) for t in self.paper_teams], dtype=np.int64)

    @cached_property
    def authorships(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened ``(author, paper)`` pairs."""
        sizes = self.team_sizes
        papers = np.repeat(np.arange(self.n_papers), sizes)
        authors = np.fromiter((a for t in self.paper_teams for a in t), dtype=np.int64, count=int(sizes.sum()))
        return authors, papers

    @cached_property
    def author_first_month(self) -> np.ndarray:
        authors, papers = self.authorships
        first = np.full(self.n_authors, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(first, authors, self.paper_month[papers])
        return first

    @classmethod
    def from_simulation(cls, corpus: Corpus, registry: AuthorRegistry, months_per_year: int) -> "Ledger":
        src, dst, month = [], [], []
        for p in corpus:
            src.extend([p.paper_id] * len(p.references))
            dst.extend(p.references)
            month.extend([p.month] * len(p.references))
        return cls(
            paper_month=corpus.months.copy(),
            paper_teams=[list(p.team) for p in corpus],
            cite_src=np.array(src, dtype=np.int64),
            cite_dst=np.array(dst, dtype=np.int64),
            cite_month=np.array(month, dtype=np.int64),
            n_authors=len(registry),
            months_per_year=months_per_year,
            paper_quality=corpus.qualities.copy(),
        )


def edge_list(ledger: Ledger) -> Sequence[tuple[int, int, int]]:
    return list(zip(ledger.cite_src.tolist(), ledger.cite_dst.tolist(), ledger.cite_month.tolist()))
