"""Resonances, their multiplicities, resonant states and Jordan chains."""

from resonances.cutoff import (
    CutoffMatrix,
    OracleSizeError,
    cutoff_matrix,
    eigen_oracle,
    faddeev_leverrier,
)
from resonances.roots import (
    RootFindingError,
    aberth_roots,
    cluster_roots,
    multiset_distance,
    polynomial_roots,
)
from resonances.solver import (
    Resonance,
    ResonanceKind,
    SpectrumSummary,
    find_resonances,
    incoming_resonances,
    summarize,
)
from resonances.states import (
    ChainResidualError,
    JordanChain,
    NotAResonanceError,
    ResonantState,
    incoming_state,
    jordan_chain,
    resonant_state,
)

__all__ = [
    "ChainResidualError",
    "CutoffMatrix",
    "JordanChain",
    "NotAResonanceError",
    "OracleSizeError",
    "Resonance",
    "ResonanceKind",
    "ResonantState",
    "RootFindingError",
    "SpectrumSummary",
    "aberth_roots",
    "cluster_roots",
    "cutoff_matrix",
    "eigen_oracle",
    "faddeev_leverrier",
    "find_resonances",
    "incoming_resonances",
    "incoming_state",
    "jordan_chain",
    "multiset_distance",
    "polynomial_roots",
    "resonant_state",
    "summarize",
]
