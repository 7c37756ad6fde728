"""Random-draw primitives shared by team assembly and the citation engine.

All randomness flows through a single ``numpy.random.Generator`` per run so
that ``(config, seed)`` fixes the whole ledger.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from coevo.config import ConfigError, ParametricFamily, SamplerMode, SamplerSpec


@lru_cache(maxsize=256)
def _histogram_table(hist: tuple[tuple[int, float], ...]) -> tuple[np.ndarray, np.ndarray]:
    values = np.array([v for v, _ in hist], dtype=np.int64)
    cdf = np.cumsum([p for _, p in hist])
    cdf[-1] = 1.0
    return values, cdf


@lru_cache(maxsize=256)
def _power_law_table(mean_offset: float, cap: int) -> np.ndarray:
    """CDF over offsets 0..cap with P(j) proportional to (j + 1) ** -alpha.

    ``alpha`` is solved so the distribution has mean ``mean_offset``.
    """
    j = np.arange(cap + 1, dtype=float)

    def mean_gap(alpha: float) -> float:
        logw = -alpha * np.log1p(j)
        w = np.exp(logw - logw.max())
        return float(np.dot(j, w) / w.sum()) - mean_offset

    if not 0 < mean_offset < cap:
        raise ConfigError(f"power-law mean offset {mean_offset} outside (0, {cap})")
    alpha = brentq(mean_gap, -20.0, 50.0, xtol=1e-12)
    logw = -alpha * np.log1p(j)
    w = np.exp(logw - logw.max())
    cdf = np.cumsum(w / w.sum())
    cdf[-1] = 1.0
    return cdf


def draw_count(sampler: SamplerSpec, year: int, years: int, rng: np.random.Generator, minimum: int = 0) -> int:
    """One integer draw for ``year``, never below ``minimum``.

    Parametric families are shifted so that their support starts at
    ``minimum`` while the total mean stays the interpolated yearly mean.
    """
    if sampler.mode is SamplerMode.EMPIRICAL_INTERVALS:
        values, cdf = _histogram_table(sampler.histogram(year))
        value = int(values[np.searchsorted(cdf, rng.random(), side="right")])
        if value < minimum:
            raise ConfigError(f"histogram for year {year} produced {value} < {minimum}")
        return value

    offset = sampler.mean_for_year(year, years) - minimum
    if offset <= 0:
        return minimum
    family = sampler.parametric_family
    if family is ParametricFamily.SHIFTED_GEOMETRIC:
        return minimum + int(rng.geometric(1.0 / (offset + 1.0))) - 1
    if family is ParametricFamily.POISSON:
        return minimum + int(rng.poisson(offset))
    cdf = _power_law_table(round(offset, 9), sampler.max_value - minimum)
    return minimum + int(np.searchsorted(cdf, rng.random(), side="right"))


def weighted_index(weights: np.ndarray, rng: np.random.Generator) -> int:
    """Index drawn with probability proportional to ``weights`` (all >= 0)."""
    cum = np.cumsum(weights)
    total = cum[-1]
    if not total > 0:
        raise ValueError("weights sum to zero")
    idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
    if idx >= len(weights):  # u * total rounded up to total
        idx = int(np.flatnonzero(weights)[-1])
    return idx


def sample_without_replacement(weights: np.ndarray, r: int, rng: np.random.Generator) -> list[int]:
    """Successive weighted draws with removal.

    Each draw is proportional to the weights of the items not yet chosen;
    zero-weight items are never chosen. Returns at most ``r`` indices and
    stops early when the positive mass runs out. Consumes exactly one
    uniform variate per returned index.
    """
    w = np.array(weights, dtype=float, copy=True)
    chosen: list[int] = []
    available = int(np.count_nonzero(w > 0))
    for _ in range(min(r, available)):
        idx = weighted_index(w, rng)
        chosen.append(idx)
        w[idx] = 0.0
    return chosen
