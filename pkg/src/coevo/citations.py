"""Reference counts and citation allocation under the fitness/aging kernel.

A paper published at month ``tau`` with quality ``eta`` and ``n`` citations
so far attracts a new citation at month ``t`` with weight

    eta * (n + c0) * exp(-(t - tau) / theta)

normalised over the eligible corpus. A citing paper's ``R`` references are
drawn one at a time without replacement from weights frozen at the start of
its allocation; its own picks do not feed back until it is done.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from coevo.config import SamplerSpec
from coevo.sampling import draw_count, sample_without_replacement


@dataclass
class PaperRecord:
    paper_id: int
    month: int
    team: list[int]
    quality: float
    citations_received: int = 0
    citation_months: list[int] = field(default_factory=list)
    references: list[int] = field(default_factory=list)


class Corpus:
    """Papers in publication order with array mirrors for fast weighting.

    Paper ids are dense: the ``i``-th paper added must have ``paper_id == i``.
    """

    def __init__(self, capacity: int = 1024) -> None:
        self.papers: list[PaperRecord] = []
        cap = max(capacity, 1)
        self._month = np.zeros(cap, dtype=np.int64)
        self._quality = np.zeros(cap, dtype=float)
        self._cites = np.zeros(cap, dtype=np.int64)

    @classmethod
    def from_records(cls, records: Iterable[PaperRecord]) -> "Corpus":
        records = list(records)
        corpus = cls(len(records))
        for rec in records:
            corpus.add(rec)
        return corpus

    def __len__(self) -> int:
        return len(self.papers)

    def __iter__(self):
        return iter(self.papers)

    def __getitem__(self, paper_id: int) -> PaperRecord:
        return self.papers[paper_id]

    def add(self, record: PaperRecord) -> None:
        n = len(self.papers)
        if record.paper_id != n:
            raise ValueError(f"expected paper_id {n}, got {record.paper_id}")
        if n >= self._month.size:
            for name in ("_month", "_quality", "_cites"):
                old = getattr(self, name)
                new = np.zeros(old.size * 2, dtype=old.dtype)
                new[: old.size] = old
                setattr(self, name, new)
        self.papers.append(record)
        self._month[n] = record.month
        self._quality[n] = record.quality
        self._cites[n] = record.citations_received

    @property
    def months(self) -> np.ndarray:
        return self._month[: len(self.papers)]

    @property
    def qualities(self) -> np.ndarray:
        return self._quality[: len(self.papers)]

    @property
    def cites(self) -> np.ndarray:
        return self._cites[: len(self.papers)]

    def _record_citation(self, paper_id: int, month: int) -> None:
        rec = self.papers[paper_id]
        rec.citations_received += 1
        rec.citation_months.append(month)
        self._cites[paper_id] += 1


def sample_reference_count(sampler: SamplerSpec, year: int, years: int, rng: np.random.Generator) -> int:
    return draw_count(sampler, year, years, rng, minimum=0)


def aging_factor(age, theta: float):
    """``exp(-age / theta)``; an infinite ``theta`` switches aging off."""
    if isinstance(age, np.ndarray):
        if math.isinf(theta):
            return np.ones(age.shape)
        return np.exp(-age / theta)
    return 1.0 if math.isinf(theta) else math.exp(-age / theta)


def citation_weight(paper: PaperRecord, t: int, theta: float, c0: float) -> float:
    if t < paper.month:
        raise ValueError(f"paper {paper.paper_id} is published after month {t}")
    return paper.quality * (paper.citations_received + c0) * aging_factor(t - paper.month, theta)


def eligible_weights(
    corpus: Corpus,
    citing_id: int | None,
    t: int,
    theta: float,
    c0: float,
    *,
    same_issue: bool = True,
    kernel: str = "minimal",
) -> np.ndarray:
    """Kernel weight of every corpus paper as a citation target at month ``t``.

    Ineligible papers (later months, the citing paper itself and, when
    ``same_issue`` is off, papers of month ``t``) get weight 0.
    """
    months = corpus.months
    eligible = months < t if not same_issue else months <= t
    if kernel == "uniform":
        w = eligible.astype(float)
    else:
        age = np.maximum(t - months, 0)
        w = corpus.qualities * (corpus.cites + c0) * aging_factor(age, theta)
        w[~eligible] = 0.0
    if citing_id is not None and 0 <= citing_id < w.size:
        w[citing_id] = 0.0
    return w


def allocate_citations(
    new_paper: PaperRecord,
    corpus: Corpus,
    r: int,
    t: int,
    theta: float,
    c0: float,
    rng: np.random.Generator,
    *,
    same_issue: bool = True,
    kernel: str = "minimal",
) -> list[int]:
    """Draw ``min(r, eligible)`` distinct targets and book the citations.

    Consumes one uniform variate per reference made.
    """
    if r < 0:
        raise ValueError("reference count must be >= 0")
    w = eligible_weights(corpus, new_paper.paper_id, t, theta, c0, same_issue=same_issue, kernel=kernel)
    targets = sample_without_replacement(w, r, rng)
    for target in targets:
        corpus._record_citation(target, t)
        new_paper.references.append(target)
    return targets


def conservation_check(corpus: Corpus | Sequence[PaperRecord]) -> bool:
    """Total references equal total citations and every reference resolves."""
    papers = list(corpus)
    ids = {p.paper_id for p in papers}
    n_refs = 0
    for p in papers:
        if any(ref not in ids for ref in p.references):
            return False
        n_refs += len(p.references)
    return n_refs == sum(p.citations_received for p in papers)
