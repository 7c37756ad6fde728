import itertools
import json
import math

import numpy as np
import pytest

from coevo.config import (
    ConfigError,
    SamplerSpec,
    SimulationConfig,
    build_schedule,
    fit_exponential,
    load_config,
    schedule_growth_rate,
)
from coevo.errors import DataError


def test_default_schedule():
    schedule = build_schedule(SimulationConfig())
    assert len(schedule.months) == 156
    assert schedule.total_papers == 2496
    assert schedule.months[0] == (1, 10)
    assert schedule.months[-1] == (156, 22)


def test_minimal_schedule():
    cfg = SimulationConfig(years=1, issues_per_year=1, base_papers_per_issue=1, papers_increment_per_year=0,
                           team_size_sampler=SamplerSpec.parametric(1.0))
    schedule = build_schedule(cfg)
    assert schedule.months == ((1, 1),)


def test_two_year_schedule():
    cfg = SimulationConfig(years=2, issues_per_year=2, base_papers_per_issue=3, papers_increment_per_year=1)
    schedule = build_schedule(cfg)
    assert schedule.months == ((1, 3), (2, 3), (3, 4), (4, 4))
    assert schedule.total_papers == 14


def test_schedule_total_matches_closed_form_exhaustively():
    for years, issues, base, inc in itertools.product(range(1, 6), range(1, 5), range(1, 6), range(0, 3)):
        cfg = SimulationConfig(years=years, issues_per_year=issues, base_papers_per_issue=base,
                               papers_increment_per_year=inc)
        schedule = build_schedule(cfg)
        assert schedule.total_papers == issues * sum(base + (t - 1) * inc for t in range(1, years + 1))
        assert [m for m, _ in schedule.months] == list(range(1, years * issues + 1))
        for month, n in schedule.months:
            assert n == base + (schedule.year_of(month) - 1) * inc


def test_schedule_is_deterministic():
    assert build_schedule(SimulationConfig()) == build_schedule(SimulationConfig())


def test_default_growth_rate():
    assert schedule_growth_rate(build_schedule(SimulationConfig())) == pytest.approx(0.0668, abs=0.002)


def test_constant_schedule_has_zero_growth():
    cfg = SimulationConfig(years=3, papers_increment_per_year=0)
    assert schedule_growth_rate(build_schedule(cfg)) == pytest.approx(0.0, abs=1e-12)


def test_growth_rate_needs_two_years():
    with pytest.raises(DataError):
        schedule_growth_rate(build_schedule(SimulationConfig(years=1)))


def test_fit_exponential_exact():
    alpha, beta = fit_exponential([1, 2, 3], np.exp([1.0, 2.0, 3.0]))
    assert beta == pytest.approx(1.0, abs=1e-12)
    assert alpha == pytest.approx(1.0, abs=1e-12)


def test_fit_exponential_linear_cumulative():
    # log-space least squares through (1, ln120), (2, ln240), (3, ln360):
    # slope = sum((t - 2) * ln y) / sum((t - 2)^2) = (ln 360 - ln 120) / 2
    _, beta = fit_exponential([1, 2, 3], [120, 240, 360])
    assert beta == pytest.approx(math.log(3) / 2, rel=1e-12)
    assert beta == pytest.approx(0.5493, abs=1e-4)


@pytest.mark.parametrize(
    "changes",
    [
        dict(newcomer_prob=1.5),
        dict(newcomer_prob=-0.1),
        dict(aging_lifetime=0),
        dict(noise_halfwidth=1.0),
        dict(pa_exponent=0.0),
        dict(pa_exponent=1.2),
        dict(years=0),
        dict(q_sigma=0),
        dict(seed=-1),
        dict(seed=2**64),
        dict(citation_kernel="bogus"),
        dict(team_size_sampler=SamplerSpec.parametric(0.5)),
    ],
)
def test_invalid_config_rejected(changes):
    with pytest.raises(ConfigError):
        SimulationConfig(**changes)


def test_histogram_must_sum_to_one():
    with pytest.raises(ConfigError):
        SamplerSpec.empirical([{1: 0.5, 2: 0.4}])
    SamplerSpec.empirical([{1: 0.5, 2: 0.5 - 1e-12}])


def test_histogram_count_must_match_years():
    sampler = SamplerSpec.empirical([{1: 1.0}] * 12)
    with pytest.raises(ConfigError):
        SimulationConfig(team_size_sampler=sampler)
    SimulationConfig(years=12, team_size_sampler=sampler)


def test_parametric_mean_interpolates():
    s = SamplerSpec.parametric(2.0, 8.0)
    assert s.mean_for_year(1, 13) == 2.0
    assert s.mean_for_year(13, 13) == 8.0
    assert s.mean_for_year(7, 13) == pytest.approx(5.0)


def test_default_team_size_mean_is_aps_like():
    cfg = SimulationConfig()
    per_year = build_schedule(cfg).papers_per_year()
    means = [cfg.team_size_sampler.mean_for_year(y, cfg.years) for y in range(1, cfg.years + 1)]
    assert np.average(means, weights=per_year) == pytest.approx(3.54, abs=1e-3)


def test_config_json_round_trip(tmp_path):
    cfg = SimulationConfig(
        seed=99,
        aging_lifetime=24.0,
        reference_sampler=SamplerSpec.empirical([[[0, 0.25], [3, 0.75]]] * 13),
    )
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert load_config(path) == cfg


def test_unknown_config_key_rejected(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"years": 3, "colour": "blue"}))
    with pytest.raises(ConfigError, match="colour"):
        load_config(path)


def test_unknown_sampler_key_rejected():
    with pytest.raises(ConfigError):
        SimulationConfig.from_dict({"team_size_sampler": {"mode": "Parametric", "mean": 3}})


def test_infinite_lifetime_accepted_from_json(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"aging_lifetime": "inf"}')
    assert math.isinf(load_config(path).aging_lifetime)
