"""Simulation configuration and the deterministic publication schedule.

One simulated month is one journal issue; every paper of an issue is
published at the same month index. Year ``t`` (1-based) publishes
``base_papers_per_issue + (t - 1) * papers_increment_per_year`` papers in
each of its issues.

Config documents are flat JSON objects whose keys mirror
:class:`SimulationConfig`; sampler fields are nested objects, histograms are
lists of ``[value, probability]`` pairs. Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from coevo.errors import ConfigError, DataError

HISTOGRAM_TOLERANCE = 1e-9
UINT64_MAX = 2**64 - 1


class SamplerMode(str, Enum):
    EMPIRICAL_INTERVALS = "EmpiricalIntervals"
    PARAMETRIC = "Parametric"


class ParametricFamily(str, Enum):
    SHIFTED_GEOMETRIC = "ShiftedGeometric"
    POISSON = "Poisson"
    DISCRETE_POWER_LAW_TRUNCATED = "DiscretePowerLawTruncated"


@dataclass(frozen=True)
class SamplerSpec:
    """Per-year integer sampler for team sizes or reference counts.

    In ``EmpiricalIntervals`` mode ``intervals`` holds one histogram per
    simulated year, each a tuple of ``(value, probability)`` pairs. In
    ``Parametric`` mode the yearly mean is interpolated linearly between
    the first-year and last-year means.
    """

    mode: SamplerMode = SamplerMode.PARAMETRIC
    intervals: tuple[tuple[tuple[int, float], ...], ...] | None = None
    parametric_mean_first_year: float = 1.0
    parametric_mean_last_year: float = 1.0
    parametric_family: ParametricFamily = ParametricFamily.SHIFTED_GEOMETRIC
    # support cap for the truncated power law, in absolute values
    max_value: int = 1000

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", SamplerMode(self.mode))
        object.__setattr__(self, "parametric_family", ParametricFamily(self.parametric_family))
        if self.mode is SamplerMode.EMPIRICAL_INTERVALS:
            if not self.intervals:
                raise ConfigError("EmpiricalIntervals sampler needs at least one histogram")
            frozen = []
            for i, hist in enumerate(self.intervals):
                pairs = tuple(sorted((int(v), float(p)) for v, p in _pairs(hist)))
                if not pairs:
                    raise ConfigError(f"histogram {i + 1} is empty")
                if any(p < 0 for _, p in pairs):
                    raise ConfigError(f"histogram {i + 1} has a negative probability")
                if any(v < 0 for v, _ in pairs):
                    raise ConfigError(f"histogram {i + 1} has a negative value")
                total = math.fsum(p for _, p in pairs)
                if abs(total - 1.0) > HISTOGRAM_TOLERANCE:
                    raise ConfigError(f"histogram {i + 1} sums to {total!r}, not 1")
                frozen.append(pairs)
            object.__setattr__(self, "intervals", tuple(frozen))
        else:
            for name in ("parametric_mean_first_year", "parametric_mean_last_year"):
                value = getattr(self, name)
                if not math.isfinite(value) or value < 0:
                    raise ConfigError(f"{name} must be a finite non-negative number, got {value!r}")
            if self.max_value < 1:
                raise ConfigError("max_value must be >= 1")

    @classmethod
    def parametric(
        cls,
        mean_first_year: float,
        mean_last_year: float | None = None,
        family: ParametricFamily | str = ParametricFamily.SHIFTED_GEOMETRIC,
        max_value: int = 1000,
    ) -> "SamplerSpec":
        return cls(
            mode=SamplerMode.PARAMETRIC,
            parametric_mean_first_year=float(mean_first_year),
            parametric_mean_last_year=float(mean_first_year if mean_last_year is None else mean_last_year),
            parametric_family=ParametricFamily(family),
            max_value=max_value,
        )

    @classmethod
    def empirical(cls, histograms: Sequence[Mapping[int, float] | Sequence[Sequence[float]]]) -> "SamplerSpec":
        return cls(mode=SamplerMode.EMPIRICAL_INTERVALS, intervals=tuple(tuple(_pairs(h)) for h in histograms))

    def mean_for_year(self, year: int, years: int) -> float:
        """Expected value of the year's distribution (before any minimum shift)."""
        if self.mode is SamplerMode.EMPIRICAL_INTERVALS:
            hist = self.histogram(year)
            return math.fsum(v * p for v, p in hist)
        if years <= 1:
            return self.parametric_mean_first_year
        frac = (year - 1) / (years - 1)
        return self.parametric_mean_first_year + frac * (
            self.parametric_mean_last_year - self.parametric_mean_first_year
        )

    def histogram(self, year: int) -> tuple[tuple[int, float], ...]:
        if self.intervals is None or not 1 <= year <= len(self.intervals):
            raise ConfigError(f"no histogram for year {year}")
        return self.intervals[year - 1]

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"mode": self.mode.value}
        if self.mode is SamplerMode.EMPIRICAL_INTERVALS:
            out["intervals"] = [[[v, p] for v, p in hist] for hist in self.intervals]
        else:
            out.update(
                parametric_mean_first_year=self.parametric_mean_first_year,
                parametric_mean_last_year=self.parametric_mean_last_year,
                parametric_family=self.parametric_family.value,
                max_value=self.max_value,
            )
        return out

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "SamplerSpec":
        allowed = {"mode", "intervals", "parametric_mean_first_year", "parametric_mean_last_year",
                   "parametric_family", "max_value"}
        unknown = set(doc) - allowed
        if unknown:
            raise ConfigError(f"unknown sampler keys: {sorted(unknown)}")
        kwargs = dict(doc)
        try:
            if "intervals" in kwargs and kwargs["intervals"] is not None:
                kwargs["intervals"] = tuple(tuple(_pairs(h)) for h in kwargs["intervals"])
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad sampler document: {exc}") from exc


def _pairs(hist) -> list[tuple[int, float]]:
    if isinstance(hist, Mapping):
        return [(int(v), float(p)) for v, p in hist.items()]
    out = []
    for pair in hist:
        if len(pair) != 2:
            raise ConfigError(f"histogram entries must be [value, probability] pairs, got {pair!r}")
        v, p = pair
        if float(v) != int(v):
            raise ConfigError(f"histogram value {v!r} is not an integer")
        out.append((int(v), float(p)))
    return out


# Overall paper-weighted mean of 3.54 on the default schedule.
DEFAULT_TEAM_SIZE_SAMPLER = SamplerSpec.parametric(2.0, 4.688)
DEFAULT_REFERENCE_SAMPLER = SamplerSpec.parametric(3.0, 15.0)


@dataclass(frozen=True)
class SimulationConfig:
    years: int = 13
    issues_per_year: int = 12
    base_papers_per_issue: int = 10
    papers_increment_per_year: int = 1
    team_size_sampler: SamplerSpec = DEFAULT_TEAM_SIZE_SAMPLER
    reference_sampler: SamplerSpec = DEFAULT_REFERENCE_SAMPLER
    newcomer_prob: float = 0.192
    aging_lifetime: float = 48.0  # months; math.inf disables aging
    initial_attractiveness: float = 1.0
    initial_connectivity: float = 1.0
    pa_exponent: float = 1.0
    q_mu: float = 0.93
    q_sigma: float = 0.46
    noise_halfwidth: float = 0.1
    seed: int = 0
    same_issue_citations: bool = True
    citation_kernel: str = "minimal"  # or "uniform" (weight 1, control runs)
    include_zero_h: bool = True

    def __post_init__(self) -> None:
        for name in ("years", "issues_per_year", "base_papers_per_issue"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.papers_increment_per_year < 0:
            raise ConfigError("papers_increment_per_year must be >= 0")
        if not 0.0 <= self.newcomer_prob <= 1.0:
            raise ConfigError(f"newcomer_prob must lie in [0, 1], got {self.newcomer_prob}")
        if not self.aging_lifetime > 0:
            raise ConfigError("aging_lifetime must be > 0")
        if not self.initial_attractiveness > 0:
            raise ConfigError("initial_attractiveness must be > 0")
        if not self.initial_connectivity > 0:
            raise ConfigError("initial_connectivity must be > 0")
        if not 0.0 < self.pa_exponent <= 1.0:
            raise ConfigError("pa_exponent must lie in (0, 1]")
        if not self.q_sigma > 0:
            raise ConfigError("q_sigma must be > 0")
        if not 0.0 <= self.noise_halfwidth < 1.0:
            raise ConfigError("noise_halfwidth must lie in [0, 1)")
        if not 0 <= int(self.seed) <= UINT64_MAX:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.citation_kernel not in ("minimal", "uniform"):
            raise ConfigError(f"unknown citation_kernel {self.citation_kernel!r}")
        for name in ("team_size_sampler", "reference_sampler"):
            sampler = getattr(self, name)
            if isinstance(sampler, Mapping):
                sampler = SamplerSpec.from_dict(sampler)
                object.__setattr__(self, name, sampler)
            if sampler.mode is SamplerMode.EMPIRICAL_INTERVALS and len(sampler.intervals) != self.years:
                raise ConfigError(
                    f"{name} has {len(sampler.intervals)} histograms, expected one per year ({self.years})"
                )
        ts = self.team_size_sampler
        if ts.mode is SamplerMode.PARAMETRIC and min(
            ts.parametric_mean_first_year, ts.parametric_mean_last_year
        ) < 1:
            raise ConfigError("parametric team-size means must be >= 1")
        if ts.mode is SamplerMode.EMPIRICAL_INTERVALS and any(v < 1 for h in ts.intervals for v, _ in h):
            raise ConfigError("team-size histograms must only contain values >= 1")

    def replace(self, **changes: Any) -> "SimulationConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.to_dict() if isinstance(value, SamplerSpec) else value
        return out

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "SimulationConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(doc)
        for name in ("team_size_sampler", "reference_sampler"):
            if name in kwargs and not isinstance(kwargs[name], SamplerSpec):
                if not isinstance(kwargs[name], Mapping):
                    raise ConfigError(f"{name} must be an object")
                kwargs[name] = SamplerSpec.from_dict(kwargs[name])
        if isinstance(kwargs.get("aging_lifetime"), str):
            kwargs["aging_lifetime"] = float(kwargs["aging_lifetime"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> SimulationConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    return SimulationConfig.from_dict(doc)


@dataclass(frozen=True)
class PublicationSchedule:
    months: tuple[tuple[int, int], ...]
    issues_per_year: int = 12
    years: int = field(default=0)

    @property
    def total_papers(self) -> int:
        return sum(n for _, n in self.months)

    def year_of(self, month: int) -> int:
        return (month - 1) // self.issues_per_year + 1

    def papers_per_year(self) -> list[int]:
        per_year = [0] * self.years
        for month, n in self.months:
            per_year[self.year_of(month) - 1] += n
        return per_year


def build_schedule(config: SimulationConfig) -> PublicationSchedule:
    months = []
    for year in range(1, config.years + 1):
        n = config.base_papers_per_issue + (year - 1) * config.papers_increment_per_year
        for issue in range(config.issues_per_year):
            months.append(((year - 1) * config.issues_per_year + issue + 1, n))
    return PublicationSchedule(tuple(months), config.issues_per_year, config.years)


def fit_exponential(t: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Fit ``y = alpha * exp(beta * t)`` by least squares on ``log y``."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.size < 2 or t.size != y.size:
        raise DataError("exponential fit needs at least two paired points")
    if np.any(y <= 0):
        raise DataError("exponential fit needs positive values")
    if np.ptp(t) == 0:
        raise DataError("exponential fit needs distinct time points")
    beta, log_alpha = np.polyfit(t, np.log(y), 1)
    return float(np.exp(log_alpha)), float(beta)


def schedule_growth_rate(schedule: PublicationSchedule) -> float:
    """Annual growth rate of papers published per year, ``exp(beta) - 1``.

    ``beta`` is the log-space least-squares slope of yearly paper counts
    against the year index. The default schedule (10 -> 22 papers per issue)
    gives about 0.0668.
    """
    per_year = schedule.papers_per_year()
    if len(per_year) < 2:
        raise DataError("growth rate needs a schedule spanning at least two years")
    _, beta = fit_exponential(range(1, len(per_year) + 1), per_year)
    return math.expm1(beta)
