"""Seed-replicated parameter sweeps.

A sweep varies one knob over a list of values and runs ``replicas`` seeds
(``seed + 0 .. seed + replicas - 1``) per value. Every (value, replica) pair
is an isolated run, so runs may execute in any order or in parallel; the
report is reduced in sorted (value, replica) order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from coevo import metrics
from coevo.config import ParametricFamily, SamplerMode, SamplerSpec, SimulationConfig
from coevo.errors import ConfigError
from coevo.simulation import RunResult, run_simulation

SWEEP_PARAMETERS = ("theta", "mean_references", "team_size_fixed_p", "newcomer_prob", "team_size_fixed_k")
IF_WINDOW = (5, 13)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]
    replicas: int = 10
    base_config: SimulationConfig = field(default_factory=SimulationConfig)
    fixed_k: float | None = None

    def __post_init__(self) -> None:
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"unknown sweep parameter {self.parameter!r}; choose from {SWEEP_PARAMETERS}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise ConfigError("sweep needs at least one value")
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        if self.parameter == "team_size_fixed_k" and self.fixed_k is None:
            raise ConfigError("team_size_fixed_k sweeps need fixed_k")
        for v in self.values:
            self.config_for(v)  # validates every value up front

    def config_for(self, value: float) -> SimulationConfig:
        base = self.base_config
        try:
            if self.parameter == "theta":
                return base.replace(aging_lifetime=value)
            if self.parameter == "newcomer_prob":
                return base.replace(newcomer_prob=value)
            if self.parameter == "mean_references":
                return base.replace(reference_sampler=_constant_sampler(base.reference_sampler, value))
            team = _constant_sampler(base.team_size_sampler, value)
            if self.parameter == "team_size_fixed_p":
                return base.replace(team_size_sampler=team)
            p = self.fixed_k / value
            if p > 1:
                raise ConfigError(f"team size {value} with k={self.fixed_k} needs newcomer probability {p:.3f} > 1")
            return base.replace(team_size_sampler=team, newcomer_prob=p)
        except ConfigError as exc:
            raise ConfigError(f"{self.parameter}={value}: {exc}") from exc


def _constant_sampler(current: SamplerSpec, mean: float) -> SamplerSpec:
    family = (
        current.parametric_family if current.mode is SamplerMode.PARAMETRIC else ParametricFamily.SHIFTED_GEOMETRIC
    )
    return SamplerSpec.parametric(mean, mean, family, current.max_value)


@dataclass
class RunSummary:
    """The parts of a run a sweep report needs (cheap to ship between processes)."""

    value: float
    seed: int
    impact_factor: dict[int, float]
    average_h: dict[int, float]
    n_papers: int
    n_authors: int
    mean_newcomers: float
    mean_team_size: float
    distributions: dict[str, np.ndarray]

    @classmethod
    def of(cls, value: float, result: RunResult) -> "RunSummary":
        return cls(
            value=value,
            seed=result.seed,
            impact_factor=result.impact_factor,
            average_h=result.average_h,
            n_papers=result.n_papers,
            n_authors=result.n_authors,
            mean_newcomers=float(result.newcomers.mean()),
            mean_team_size=float(result.ledger.team_sizes.mean()),
            distributions=result.distributions,
        )

    def mean_if(self, window: tuple[int, int] = IF_WINDOW) -> float:
        vals = [v for k, v in self.impact_factor.items() if window[0] <= k <= window[1]]
        return float(np.mean(vals)) if vals else math.nan

    @property
    def final_average_h(self) -> float:
        return self.average_h[max(self.average_h)]


@dataclass
class ValueReport:
    value: float
    config: SimulationConfig
    runs: list[RunSummary]

    def _stat(self, per_run: Sequence[float]) -> tuple[float, float]:
        arr = np.asarray(per_run, dtype=float)
        sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        return float(arr.mean()), sd

    def if_by_year(self) -> dict[int, tuple[float, float]]:
        years = sorted(set().union(*(r.impact_factor for r in self.runs)))
        return {y: self._stat([r.impact_factor[y] for r in self.runs if y in r.impact_factor]) for y in years}

    def h_by_year(self) -> dict[int, tuple[float, float]]:
        years = sorted(set().union(*(r.average_h for r in self.runs)))
        return {y: self._stat([r.average_h[y] for r in self.runs if y in r.average_h]) for y in years}

    @property
    def mean_if(self) -> float:
        return float(np.mean([r.mean_if() for r in self.runs]))

    @property
    def mean_final_h(self) -> float:
        return float(np.mean([r.final_average_h for r in self.runs]))

    @property
    def mean_authors(self) -> float:
        return float(np.mean([r.n_authors for r in self.runs]))

    @property
    def mean_newcomers(self) -> float:
        return float(np.mean([r.mean_newcomers for r in self.runs]))

    def pooled(self, name: str) -> np.ndarray:
        return np.concatenate([r.distributions[name] for r in self.runs])


@dataclass
class SweepReport:
    spec: SweepSpec
    values: list[ValueReport]

    def by_value(self) -> dict[float, ValueReport]:
        return {v.value: v for v in self.values}


def _run_one(task: tuple[float, SimulationConfig, int]) -> RunSummary:
    value, config, seed = task
    return RunSummary.of(value, run_simulation(config, seed))


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepReport:
    base_seed = spec.base_config.seed
    tasks = [
        (value, spec.config_for(value), base_seed + rep)
        for value in spec.values
        for rep in range(spec.replicas)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(_run_one, tasks))
    else:
        summaries = [_run_one(t) for t in tasks]
    summaries.sort(key=lambda s: (spec.values.index(s.value), s.seed))
    reports = []
    for value in spec.values:
        runs = [s for s in summaries if s.value == value]
        reports.append(ValueReport(value, spec.config_for(value), runs))
    return SweepReport(spec, reports)


def top_h_linearity(result: RunResult, top: int = 3) -> list[float]:
    """R^2 of a straight-line fit to each top researcher's yearly h.

    Trajectories start at the researcher's first publication year.
    """
    traj = metrics.h_trajectories(result.ledger)
    final = traj[:, -1]
    leaders = np.argsort(-final, kind="stable")[:top]
    first_year = result.ledger.year_of(result.ledger.author_first_month[leaders])
    return [metrics.linear_r_squared(traj[a, fy - 1 :]) for a, fy in zip(leaders, first_year)]
