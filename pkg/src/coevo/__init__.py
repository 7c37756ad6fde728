"""Coevolution of coauthorship and citation networks for one virtual journal."""

from coevo.config import PublicationSchedule, SamplerSpec, SimulationConfig, build_schedule
from coevo.simulation import RunResult, run_simulation

__all__ = [
    "PublicationSchedule",
    "RunResult",
    "SamplerSpec",
    "SimulationConfig",
    "build_schedule",
    "run_simulation",
]
