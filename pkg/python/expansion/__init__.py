"""Resonance expansion, the zero space V_J(0) and cut-off resolvents."""

from expansion.decompose import (
    ExpansionResult,
    ExpansionTerm,
    TimeBoundError,
    expand,
    predict_evolution,
    reconstruct,
    verify_time_formula,
)
from expansion.resolvent import (
    ContourProjector,
    ResolventPoleError,
    contour_projector,
    free_resolvent_apply,
    resolvent_apply,
)
from expansion.zero_space import ZeroSpace, boundary_witnesses, zero_space

__all__ = [
    "ContourProjector",
    "ExpansionResult",
    "ExpansionTerm",
    "ResolventPoleError",
    "TimeBoundError",
    "ZeroSpace",
    "boundary_witnesses",
    "contour_projector",
    "expand",
    "free_resolvent_apply",
    "predict_evolution",
    "reconstruct",
    "resolvent_apply",
    "verify_time_formula",
    "zero_space",
]
