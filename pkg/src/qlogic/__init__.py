"""Quantum-proposition toolkit: subspace algebra over C^d, context blocks,
bivalent / supervaluational / Lukasiewicz valuation engines, and a
Kochen-Specker colorability checker."""

from .hilbert import (
    DEFAULT_EPS,
    Projector,
    StateVector,
    Subspace,
    Tolerance,
    complement,
    commutes,
    contains,
    join,
    meet,
    orthogonal,
    orthonormalize,
    projector_of,
    range_of,
    subspace_equal,
)

__all__ = [
    "DEFAULT_EPS",
    "Projector",
    "StateVector",
    "Subspace",
    "Tolerance",
    "complement",
    "commutes",
    "contains",
    "join",
    "meet",
    "orthogonal",
    "orthonormalize",
    "projector_of",
    "range_of",
    "subspace_equal",
]
