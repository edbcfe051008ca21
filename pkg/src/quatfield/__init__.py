"""quatfield: desk-scale checks for quaternionic scalar field theory.

Classical plane-wave solutions of the quaternionic Klein-Gordon equation
with their relativistic constraints, both quantization schemes on truncated
Fock spaces, energy and charge operators, reconstruction of the wave
function from quantized components, and the non-associative operator
identity, each backed by an executable verification.
"""

from .minkowski import FourVector, minkowski_dot
from .planewave import (
    ConstraintViolation,
    DegenerateTheta,
    NoRealSolution,
    PlaneWaveSpec,
    component_residuals,
    effective_momenta,
    evaluate_wave,
    kg_residual,
    random_valid_spec,
    solve_k,
    validate_constraints,
)
from .quaternion import Quaternion, SymplecticPair, associator, commutator

__all__ = [
    "ConstraintViolation",
    "DegenerateTheta",
    "FourVector",
    "NoRealSolution",
    "PlaneWaveSpec",
    "Quaternion",
    "SymplecticPair",
    "associator",
    "commutator",
    "component_residuals",
    "effective_momenta",
    "evaluate_wave",
    "kg_residual",
    "minkowski_dot",
    "random_valid_spec",
    "solve_k",
    "validate_constraints",
]

__version__ = "0.1.0"
