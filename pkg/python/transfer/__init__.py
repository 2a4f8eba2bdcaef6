"""Transfer matrices, the resonance polynomial and the scattering matrix."""

from transfer.laurent import LaurentMatrix, LaurentPoly
from transfer.matrices import (
    FreeWalkError,
    SigmaPoly,
    TransferParameters,
    incoming_sigma,
    sigma,
    site_parameters,
    transfer_at,
    transfer_delta,
    transfer_inverse_at,
    transfer_parameters,
    transfer_poly,
    transfer_poly_from_parameters,
)
from transfer.scattering import (
    ScatteringMatrix,
    ScatteringPoleError,
    scattering_matrix,
    resonance_multiplicity_from_trace,
)

__all__ = [
    "FreeWalkError",
    "LaurentMatrix",
    "LaurentPoly",
    "ScatteringMatrix",
    "ScatteringPoleError",
    "SigmaPoly",
    "TransferParameters",
    "incoming_sigma",
    "scattering_matrix",
    "sigma",
    "site_parameters",
    "resonance_multiplicity_from_trace",
    "transfer_at",
    "transfer_delta",
    "transfer_inverse_at",
    "transfer_parameters",
    "transfer_poly",
    "transfer_poly_from_parameters",
]
