"""Impact indicators and the binned distributions behind every figure.

All functions read a :class:`~coevo.ledger.Ledger` and never mutate it.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np

from coevo.coauthor import collaborators_from_teams
from coevo.errors import DataError, UndefinedIndicator
from coevo.ledger import Ledger

YEARLY_QUANTITIES = ("mean_team_size", "mean_reference_count", "cumulative_papers", "cumulative_authors")


# -- journal impact factor ---------------------------------------------------

def impact_factor_counts(ledger: Ledger, k: int) -> tuple[int, int]:
    """Numerator and denominator of IF(k) as exact integers.

    Numerator: citations arriving during year ``k`` to papers of years
    ``k - 1`` and ``k - 2``. Denominator: papers published in those years.
    """
    if k < 3:
        raise ValueError("impact factor needs two prior years (k >= 3)")
    cite_year = ledger.year_of(ledger.cite_month)
    target_year = ledger.paper_year[ledger.cite_dst] if ledger.cite_dst.size else ledger.cite_dst
    window = (target_year == k - 1) | (target_year == k - 2)
    numerator = int(np.count_nonzero((cite_year == k) & window))
    py = ledger.paper_year
    denominator = int(np.count_nonzero((py == k - 1) | (py == k - 2)))
    return numerator, denominator


def impact_factor(ledger: Ledger, k: int) -> float:
    numerator, denominator = impact_factor_counts(ledger, k)
    if denominator == 0:
        raise UndefinedIndicator(f"IF({k}) undefined: no papers in years {k - 2} and {k - 1}")
    return numerator / denominator


def impact_factor_series(ledger: Ledger) -> dict[int, float]:
    """IF for every year from 3 on; undefined years are left out."""
    series = {}
    for k in range(3, ledger.n_years + 1):
        try:
            series[k] = impact_factor(ledger, k)
        except UndefinedIndicator:
            continue
    return series


# -- h-index -----------------------------------------------------------------

def h_index(citation_counts: Sequence[int]) -> int:
    """Largest ``h`` such that ``h`` papers have at least ``h`` citations each."""
    ranked = sorted(citation_counts, reverse=True)
    h = 0
    for position, c in enumerate(ranked, start=1):
        if c < position:
            break
        h = position
    return h


def _cutoff(ledger: Ledger, at_year: int | None) -> int:
    if at_year is None:
        return int(max(ledger.paper_month.max(initial=0), ledger.cite_month.max(initial=0)))
    return at_year * ledger.months_per_year


def author_h_indices(ledger: Ledger, at_year: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``(author_ids, h)`` for every author registered by the end of ``at_year``.

    Only citations that arrived by then count.
    """
    cutoff = _cutoff(ledger, at_year)
    counted = ledger.cite_month <= cutoff
    cites = np.bincount(ledger.cite_dst[counted], minlength=ledger.n_papers)
    authors, papers = ledger.authorships
    live = ledger.paper_month[papers] <= cutoff
    authors, papers = authors[live], papers[live]
    c = cites[papers]
    order = np.lexsort((-c, authors))
    a_sorted, c_sorted = authors[order], c[order]
    if a_sorted.size:
        starts = np.flatnonzero(np.r_[True, a_sorted[1:] != a_sorted[:-1]])
        lengths = np.diff(np.r_[starts, a_sorted.size])
        rank = np.arange(a_sorted.size) - np.repeat(starts, lengths) + 1
        h_all = np.bincount(a_sorted[c_sorted >= rank], minlength=ledger.n_authors)
    else:
        h_all = np.zeros(ledger.n_authors, dtype=np.int64)
    registered = np.flatnonzero(ledger.author_first_month <= cutoff)
    return registered, h_all[registered]


def h_index_distribution(ledger: Ledger, at_year: int | None = None) -> dict[int, int]:
    _, h = author_h_indices(ledger, at_year)
    return dict(sorted(Counter(h.tolist()).items()))


def average_h_index(ledger: Ledger, at_year: int | None = None, include_zero_h: bool = True) -> float:
    _, h = author_h_indices(ledger, at_year)
    if not include_zero_h:
        h = h[h > 0]
    if h.size == 0:
        raise UndefinedIndicator("average h-index undefined: no authors")
    return float(h.mean())


def average_h_series(ledger: Ledger, include_zero_h: bool = True) -> dict[int, float]:
    series = {}
    for year in range(1, ledger.n_years + 1):
        try:
            series[year] = average_h_index(ledger, year, include_zero_h)
        except UndefinedIndicator:
            continue
    return series


def h_trajectories(ledger: Ledger) -> np.ndarray:
    """``n_authors x n_years`` matrix of h at the end of each year."""
    out = np.zeros((ledger.n_authors, ledger.n_years), dtype=np.int64)
    for year in range(1, ledger.n_years + 1):
        ids, h = author_h_indices(ledger, year)
        out[ids, year - 1] = h
    return out


# -- per-entity distributions ------------------------------------------------

def productivity_counts(ledger: Ledger) -> np.ndarray:
    authors, _ = ledger.authorships
    return np.bincount(authors, minlength=ledger.n_authors)


def collaborator_counts(ledger: Ledger) -> np.ndarray:
    return collaborators_from_teams(ledger.paper_teams, ledger.n_authors)


def final_distributions(ledger: Ledger) -> dict[str, np.ndarray]:
    """Raw per-entity values at the end of the ledger."""
    _, h = author_h_indices(ledger)
    return {
        "citations": ledger.n_cites,
        "productivity": productivity_counts(ledger),
        "collaborators": collaborator_counts(ledger),
        "team_size": ledger.team_sizes[ledger.team_sizes > 0],
        "references": ledger.n_refs,
        "h_index": h,
    }


def log_bin_edges(values: Sequence[float], bins_per_decade: int = 5) -> tuple[np.ndarray, bool]:
    """Bin edges for :func:`log_binned_distribution` and whether the data is integer.

    Integer data at or above 1 gets unit bins for 1..9 and logarithmic bins
    from 10 up; anything else is binned logarithmically from the decade of
    its minimum. The last edge always lies above the maximum.
    """
    if bins_per_decade < 1:
        raise ValueError("bins_per_decade must be >= 1")
    v = np.asarray(values, dtype=float)
    if np.any(v <= 0):
        raise ValueError("log binning needs positive values")
    integer = bool(np.all(v == np.round(v))) and v.min() >= 1
    if integer:
        decade0, edges = 1.0, list(np.arange(1.0, 11.0))
    else:
        decade0 = float(np.floor(np.log10(v.min())))
        edges = [10.0**decade0]
    j = 1
    while edges[-1] <= v.max():
        edges.append(10.0 ** (decade0 + j / bins_per_decade))
        j += 1
    return np.array(edges), integer


def log_binned_distribution(values: Sequence[float], bins_per_decade: int = 5) -> list[tuple[float, float]]:
    """Log-binned probability density ``(bin_center, density)``, total mass 1.

    For integer data a bin's width is the number of integers it holds, so
    density times width is the bin's probability. Empty bins are omitted.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return []
    edges, integer = log_bin_edges(v, bins_per_decade)
    counts, _ = np.histogram(v, bins=edges)
    lo, hi = edges[:-1], edges[1:]
    if integer:
        widths = np.ceil(hi) - np.ceil(lo)
        centers = np.where(hi - lo == 1.0, lo, np.sqrt(lo * hi))
    else:
        widths = hi - lo
        centers = np.sqrt(lo * hi)
    return [
        (float(c), float(n / (v.size * w)))
        for c, n, w in zip(centers, counts, widths)
        if n > 0
    ]


# -- yearly series and fits --------------------------------------------------

def yearly_series(ledger: Ledger, quantity: str) -> list[float]:
    """Per-year value of ``quantity`` for years 1..n_years."""
    if quantity not in YEARLY_QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; choose from {YEARLY_QUANTITIES}")
    years = ledger.n_years
    py = ledger.paper_year
    if quantity == "cumulative_papers":
        return np.cumsum(np.bincount(py, minlength=years + 1)[1:]).astype(float).tolist()
    if quantity == "cumulative_authors":
        first = ledger.author_first_month
        first = first[first < np.iinfo(np.int64).max]
        fy = ledger.year_of(first)
        return np.cumsum(np.bincount(fy, minlength=years + 1)[1:]).astype(float).tolist()
    if quantity == "mean_team_size":
        sizes = ledger.team_sizes
        keep = sizes > 0
        values, py = sizes[keep], py[keep]
    else:
        values = ledger.n_refs
    totals = np.bincount(py, weights=values, minlength=years + 1)[1:]
    counts = np.bincount(py, minlength=years + 1)[1:]
    with np.errstate(invalid="ignore", divide="ignore"):
        return (totals / counts).tolist()


def fit_linear_through_origin(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``y = k x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size == 0 or x.size != y.size:
        raise DataError("need equal-length, non-empty series")
    sxx = float(np.dot(x, x))
    if sxx == 0:
        raise DataError("x is identically zero")
    return float(np.dot(x, y) / sxx)


def coefficient_of_variation(values: Sequence[float]) -> float:
    v = np.asarray(values, dtype=float)
    return float(v.std() / v.mean())


def gini(values: Sequence[float]) -> float:
    v = np.sort(np.asarray(values, dtype=float))
    n = v.size
    if n == 0 or v.sum() == 0:
        return 0.0
    ranks = np.arange(1, n + 1)
    return float((2 * np.dot(ranks, v) / (n * v.sum())) - (n + 1) / n)


def linear_r_squared(y: Sequence[float]) -> float:
    """R^2 of an ordinary least-squares line through ``y`` against its index."""
    y = np.asarray(y, dtype=float)
    x = np.arange(y.size, dtype=float)
    if y.size < 3:
        return 1.0
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0:
        return 1.0
    return 1.0 - float((resid**2).sum()) / ss_tot
