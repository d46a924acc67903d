"""Exact SU(2) exponentials and their adjoint action on Bloch vectors."""

from .rotations import su2_params, su2_params_batch, adjoint_rotation, adjoint_rotations, is_rotation
from .bloch import FieldVector, BlochVector, density_from_bloch, bloch_from_density, bloch_roundtrip

__all__ = [
    'su2_params',
    'su2_params_batch',
    'adjoint_rotation',
    'adjoint_rotations',
    'is_rotation',
    'FieldVector',
    'BlochVector',
    'density_from_bloch',
    'bloch_from_density',
    'bloch_roundtrip',
]
