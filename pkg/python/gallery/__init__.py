"""Named models, the coin group, symmetries and the perturbation family."""

from gallery.group import GroupElement, OutsideGroupError, from_group, group_product, to_group
from gallery.models import (
    DoubleBarrier,
    TripleBarrier,
    double_barrier,
    double_barrier_alpha,
    double_barrier_amplitudes,
    double_barrier_state,
    random_kz_walk,
    random_walk,
    triple_barrier,
)
from gallery.perturbation import (
    SplittingReport,
    gamma,
    gamma_finite_difference,
    generic_theta,
    perturb,
    perturbation_coin,
    splitting_report,
)
from gallery.symmetry import (
    GaugeConditionError,
    GaugeResult,
    conjugate_state,
    conjugation_defect,
    gauge_transform,
    rotation_defect,
)

__all__ = [
    "DoubleBarrier",
    "GaugeConditionError",
    "GaugeResult",
    "GroupElement",
    "OutsideGroupError",
    "SplittingReport",
    "TripleBarrier",
    "conjugate_state",
    "conjugation_defect",
    "double_barrier",
    "double_barrier_alpha",
    "double_barrier_amplitudes",
    "double_barrier_state",
    "from_group",
    "gamma",
    "gamma_finite_difference",
    "gauge_transform",
    "generic_theta",
    "group_product",
    "perturb",
    "perturbation_coin",
    "random_kz_walk",
    "random_walk",
    "rotation_defect",
    "splitting_report",
    "to_group",
    "triple_barrier",
]
