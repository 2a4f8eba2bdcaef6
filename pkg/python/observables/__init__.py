"""Distributions, survival, mean exit time, weak limits and pointwise asymptotics."""

from observables.asymptotics import (
    PointwiseReport,
    pointwise_asymptotics,
    pointwise_frame,
    restricted_state_profile,
)
from observables.distribution import Distribution, distribution, heatmap_frame
from observables.survival import (
    DecayReport,
    SurvivalReport,
    mean_survival_time,
    restricted_state_tau,
    survival,
    upsilon,
)
from observables.weak_limit import (
    WeakLimitReport,
    restricted_weak_limit,
    time_series_frame,
    weak_limit,
)

__all__ = [
    "DecayReport",
    "Distribution",
    "PointwiseReport",
    "SurvivalReport",
    "WeakLimitReport",
    "distribution",
    "heatmap_frame",
    "mean_survival_time",
    "pointwise_asymptotics",
    "pointwise_frame",
    "restricted_state_profile",
    "restricted_state_tau",
    "restricted_weak_limit",
    "survival",
    "time_series_frame",
    "upsilon",
    "weak_limit",
]
