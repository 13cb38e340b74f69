"""Vertical handover decision simulator built on SAW and TOPSIS ranking."""

__version__ = "0.1.0"

from .madm import (  # noqa: E402
    CriterionSpec,
    DecisionMatrix,
    Direction,
    Method,
    Normalization,
    Ranking,
    rank,
    saw,
    topsis,
)
from .scenario import ScenarioConfig, Scheme, load_scenario  # noqa: E402
from .sim import MetricsReport, run_scenario, simulate  # noqa: E402

__all__ = [
    "CriterionSpec",
    "DecisionMatrix",
    "Direction",
    "Method",
    "MetricsReport",
    "Normalization",
    "Ranking",
    "ScenarioConfig",
    "Scheme",
    "load_scenario",
    "rank",
    "run_scenario",
    "saw",
    "simulate",
    "topsis",
]
