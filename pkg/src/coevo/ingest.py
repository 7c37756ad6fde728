"""APS-style empirical data: parsing, filtering, interval histograms, growth fits.

Input files:

* metadata CSV with header ``doi,authors,date``; authors ``;``-separated,
  dates ISO ``YYYY-MM-DD``.
* citation pairs CSV with header ``citing_doi,cited_doi``.

Only pairs whose two papers are both in the metadata are kept, so total
references always equal total citations. Authors are identified by their
normalised name (trimmed, case-folded, whitespace collapsed).
"""

from __future__ import annotations

import csv
import datetime as dt
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from coevo.config import SamplerSpec, fit_exponential
from coevo.errors import DataError
from coevo.ledger import Ledger
from coevo.metrics import fit_linear_through_origin

log = logging.getLogger(__name__)

METADATA_HEADER = ["doi", "authors", "date"]
PAIRS_HEADER = ["citing_doi", "cited_doi"]


def normalize_name(name: str) -> str:
    return " ".join(name.split()).casefold()


@dataclass(frozen=True)
class MetadataRecord:
    doi: str
    author_names: tuple[str, ...]
    publication_date: dt.date


@dataclass(frozen=True)
class CitationPair:
    citing_doi: str
    cited_doi: str


@dataclass(frozen=True)
class Reject:
    line: int
    reason: str
    raw: str


def _open_csv(path: str | Path, header: list[str]):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    reader = csv.reader(text.splitlines())
    first = next(reader, None)
    if first is None or [h.strip().lower() for h in first] != header:
        raise DataError(f"{path}: expected header {','.join(header)}, got {first}")
    return reader


def load_metadata(path: str | Path) -> tuple[list[MetadataRecord], list[Reject]]:
    """Parse the metadata file; malformed rows go to the rejects list."""
    records: list[MetadataRecord] = []
    rejects: list[Reject] = []
    seen: set[str] = set()
    for line, row in enumerate(_open_csv(path, METADATA_HEADER), start=2):
        raw = ",".join(row)
        if len(row) != 3:
            rejects.append(Reject(line, f"expected 3 fields, got {len(row)}", raw))
            continue
        doi, authors, date = (x.strip() for x in row)
        if not doi:
            rejects.append(Reject(line, "empty doi", raw))
            continue
        if doi in seen:
            rejects.append(Reject(line, f"duplicate doi {doi}", raw))
            continue
        try:
            when = dt.date.fromisoformat(date)
        except ValueError:
            rejects.append(Reject(line, f"unparseable date {date!r}", raw))
            continue
        names = tuple(n for n in (normalize_name(a) for a in authors.split(";")) if n)
        seen.add(doi)
        records.append(MetadataRecord(doi, names, when))
    if rejects:
        log.warning("%s: %d malformed rows rejected", path, len(rejects))
    return records, rejects


def load_pairs(path: str | Path) -> tuple[list[CitationPair], list[Reject]]:
    pairs: list[CitationPair] = []
    rejects: list[Reject] = []
    for line, row in enumerate(_open_csv(path, PAIRS_HEADER), start=2):
        if len(row) != 2 or not row[0].strip() or not row[1].strip():
            rejects.append(Reject(line, "expected two non-empty dois", ",".join(row)))
            continue
        pairs.append(CitationPair(row[0].strip(), row[1].strip()))
    return pairs, rejects


def write_rejects(rejects: Iterable[Reject], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["line", "reason", "raw"])
        for r in rejects:
            w.writerow([r.line, r.reason, r.raw])


def filter_pairs_with_stats(
    pairs: Sequence[CitationPair], metadata: Sequence[MetadataRecord]
) -> tuple[list[CitationPair], dict[str, int]]:
    known = {m.doi for m in metadata}
    kept = [p for p in pairs if p.citing_doi in known and p.cited_doi in known]
    dates = {m.doi: m.publication_date for m in metadata}
    reversed_ = sum(1 for p in kept if dates[p.citing_doi] < dates[p.cited_doi])
    stats = {"retained": len(kept), "dropped": len(pairs) - len(kept), "time_reversed": reversed_}
    return kept, stats


def filter_pairs(pairs: Sequence[CitationPair], metadata: Sequence[MetadataRecord]) -> list[CitationPair]:
    """Keep only pairs whose citing and cited papers are both known."""
    kept, stats = filter_pairs_with_stats(pairs, metadata)
    log.info("citation pairs: %(retained)d retained, %(dropped)d dropped", stats)
    return kept


def _chronological(metadata: Sequence[MetadataRecord]) -> list[MetadataRecord]:
    return sorted(metadata, key=lambda m: (m.publication_date, m.doi))


def split_intervals(
    records: Sequence[MetadataRecord], intervals: int, split: str = "equal_count"
) -> list[list[MetadataRecord]]:
    """Chronological split into ``intervals`` groups.

    ``equal_count`` gives every group ``n // intervals`` papers and spreads
    the remainder over the earliest groups; ``equal_duration`` cuts the date
    range into equal spans.
    """
    if intervals < 1:
        raise DataError("intervals must be >= 1")
    ordered = _chronological(records)
    n = len(ordered)
    if n < intervals:
        raise DataError(f"{n} papers cannot fill {intervals} intervals")
    if split == "equal_count":
        base, extra = divmod(n, intervals)
        groups, start = [], 0
        for i in range(intervals):
            size = base + (1 if i < extra else 0)
            groups.append(ordered[start : start + size])
            start += size
        return groups
    if split == "equal_duration":
        t0 = ordered[0].publication_date.toordinal()
        span = ordered[-1].publication_date.toordinal() - t0 + 1
        groups = [[] for _ in range(intervals)]
        for rec in ordered:
            idx = min((rec.publication_date.toordinal() - t0) * intervals // span, intervals - 1)
            groups[idx].append(rec)
        if any(not g for g in groups):
            raise DataError("an equal-duration interval holds no papers")
        return groups
    raise DataError(f"unknown split {split!r}")


def build_interval_histograms(
    metadata: Sequence[MetadataRecord],
    pairs: Sequence[CitationPair],
    intervals: int = 13,
    quantity: str = "team_size",
    split: str = "equal_count",
) -> SamplerSpec:
    """Per-interval normalised histograms of team size or reference count."""
    if quantity == "team_size":
        records = [m for m in metadata if m.author_names]
        value_of = {m.doi: len(set(m.author_names)) for m in records}
    elif quantity == "reference_count":
        records = list(metadata)
        value_of = {m.doi: 0 for m in records}
        for p in pairs:
            if p.citing_doi in value_of:
                value_of[p.citing_doi] += 1
    else:
        raise DataError(f"unknown quantity {quantity!r}")
    histograms = []
    for group in split_intervals(records, intervals, split):
        values, counts = np.unique([value_of[m.doi] for m in group], return_counts=True)
        total = counts.sum()
        histograms.append([[int(v), c / total] for v, c in zip(values, counts)])
    return SamplerSpec.empirical(histograms)


def _yearly_cumulative(metadata: Sequence[MetadataRecord]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ordered = _chronological(metadata)
    if not ordered:
        raise DataError("no metadata records")
    y0 = ordered[0].publication_date.year
    years = ordered[-1].publication_date.year - y0 + 1
    papers = np.zeros(years, dtype=np.int64)
    authors = np.zeros(years, dtype=np.int64)
    seen: set[str] = set()
    for rec in ordered:
        i = rec.publication_date.year - y0
        papers[i] += 1
        for name in rec.author_names:
            if name not in seen:
                seen.add(name)
                authors[i] += 1
    return np.arange(1, years + 1), np.cumsum(papers), np.cumsum(authors)


def fit_growth(metadata: Sequence[MetadataRecord]) -> tuple[float, float, float]:
    """``(alpha, beta, k)``: exponential fit of yearly cumulative papers and
    new authors per paper from cumulative authors against cumulative papers.

    Time is the 1-based calendar-year index from the first year in the data.
    """
    t, cum_papers, cum_authors = _yearly_cumulative(metadata)
    if t.size < 2:
        raise DataError("growth fit needs at least two years of data")
    alpha, beta = fit_exponential(t, cum_papers)
    k = fit_linear_through_origin(cum_papers, cum_authors)
    return alpha, beta, k


def build_ledger(metadata: Sequence[MetadataRecord], pairs: Sequence[CitationPair]) -> Ledger:
    """Reduce ingested data to a monthly ledger (month 1 = January of the first year).

    Citations are dated by the citing paper's publication month. Author ids
    follow first appearance in chronological order.
    """
    ordered = _chronological(metadata)
    if not ordered:
        raise DataError("no metadata records")
    y0 = ordered[0].publication_date.year
    index = {m.doi: i for i, m in enumerate(ordered)}
    months = np.array([(m.publication_date.year - y0) * 12 + m.publication_date.month for m in ordered])
    author_id: dict[str, int] = {}
    teams: list[list[int]] = []
    for rec in ordered:
        team = []
        for name in dict.fromkeys(rec.author_names):
            team.append(author_id.setdefault(name, len(author_id)))
        teams.append(team)
    kept = filter_pairs(pairs, metadata)
    src = np.array([index[p.citing_doi] for p in kept], dtype=np.int64)
    dst = np.array([index[p.cited_doi] for p in kept], dtype=np.int64)
    return Ledger(
        paper_month=months,
        paper_teams=teams,
        cite_src=src,
        cite_dst=dst,
        cite_month=months[src] if src.size else src,
        n_authors=len(author_id),
        months_per_year=12,
        author_labels=list(author_id),
    )


def write_aps_files(ledger: Ledger, out_dir: str | Path, base_year: int = 2001) -> list[Path]:
    """Export a ledger as APS-style ``metadata.csv`` and ``pairs.csv``.

    Month ``m`` maps to the first day of calendar month ``m`` counted from
    January of ``base_year``, so re-ingesting reproduces the same months,
    paper order and author ids.
    """
    if ledger.months_per_year != 12:
        raise DataError("APS export needs 12 issues per year")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    meta_path, pairs_path = out_dir / "metadata.csv", out_dir / "pairs.csv"
    width = max(len(str(ledger.n_papers)), 6)
    doi = [f"sim/{i:0{width}d}" for i in range(ledger.n_papers)]
    with open(meta_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(METADATA_HEADER)
        for i, (month, team) in enumerate(zip(ledger.paper_month.tolist(), ledger.paper_teams)):
            year, moy = divmod(month - 1, 12)
            w.writerow([doi[i], ";".join(f"a{a}" for a in team), f"{base_year + year:04d}-{moy + 1:02d}-01"])
    with open(pairs_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PAIRS_HEADER)
        for s, d in zip(ledger.cite_src.tolist(), ledger.cite_dst.tolist()):
            w.writerow([doi[s], doi[d]])
    return [meta_path, pairs_path]
