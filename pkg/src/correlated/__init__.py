"""Correlated-noise extension: separable-kernel transfer operator and its rates."""

from .s_matrix import (
    SMatrix,
    BoundaryVectors,
    pointwise_transfer,
    pointwise_transfers,
    build_s_matrix,
    boundary_vectors,
    propagate_correlated,
)
from .rates import DEFAULT_TRANSIENT_CUT, NoSurvivingModesError, asymptotic_rates, physical_count

__all__ = [
    'SMatrix',
    'BoundaryVectors',
    'pointwise_transfer',
    'pointwise_transfers',
    'build_s_matrix',
    'boundary_vectors',
    'propagate_correlated',
    'NoSurvivingModesError',
    'asymptotic_rates',
    'DEFAULT_TRANSIENT_CUT',
    'physical_count',
]
