"""
Exact SU(2) exponentials and their adjoint action.

Conventions: hbar = 1, H = -B . sigma, U = exp(-iH t) = exp(iB . sigma t)
= c + i s . sigma with c = cos(Bt), s = B_hat sin(Bt). The adjoint action
U^dagger sigma_i U = R_ij sigma_j gives

    R_ij = (c^2 - |s|^2) delta_ij + 2 s_i s_j + 2 c eps_ijk s_k

so a static field along +z rotates x into +y (R_xy = +sin 2Bt).
"""

from typing import Union

import numpy as np

from .bloch import FieldVector


FieldLike = Union[FieldVector, np.ndarray, tuple, list]

# Below this Bt the factor sin(Bt)/B is replaced by its series
SMALL_ANGLE = 1e-6

# Levi-Civita tensor
EPSILON = np.zeros((3, 3, 3))
EPSILON[0, 1, 2] = EPSILON[1, 2, 0] = EPSILON[2, 0, 1] = 1.0
EPSILON[0, 2, 1] = EPSILON[2, 1, 0] = EPSILON[1, 0, 2] = -1.0


def _as_array(field: FieldLike) -> np.ndarray:
    if isinstance(field, FieldVector):
        return field.as_array()
    return np.asarray(field, dtype=float)


def su2_params_batch(fields: np.ndarray, duration: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Vectorized su2_params over an (..., 3) array of fields.

    Returns:
        Tuple of (c, s) with shapes (...,) and (..., 3)
    """
    if duration < 0:
        raise ValueError(f"Duration must be non-negative, got {duration}")

    fields = np.asarray(fields, dtype=float)
    magnitude = np.linalg.norm(fields, axis=-1)
    angle = magnitude * duration

    small = angle < SMALL_ANGLE
    safe_magnitude = np.where(small, 1.0, magnitude)
    factor = np.asarray(np.where(
        small,
        duration * (1.0 - angle ** 2 / 6.0),
        np.sin(angle) / safe_magnitude,
    ))
    return np.asarray(np.cos(angle)), fields * factor[..., np.newaxis]


def su2_params(field: FieldLike, duration: float) -> tuple[float, np.ndarray]:
    """
    Decompose exp(i X . sigma t) = c + i s . sigma.

    Args:
        field: Field vector X
        duration: Time t >= 0

    Returns:
        Tuple of (c, s) with c = cos(Xt) and s = X_hat sin(Xt)
    """
    c, s = su2_params_batch(_as_array(field), duration)
    return float(c), s


def adjoint_rotations(fields: np.ndarray, duration: float) -> np.ndarray:
    """Vectorized adjoint_rotation over an (..., 3) array; returns (..., 3, 3)."""
    c, s = su2_params_batch(fields, duration)
    diagonal = np.asarray(c ** 2 - np.einsum('...i,...i->...', s, s))

    rotation = 2.0 * np.einsum('...i,...j->...ij', s, s)
    rotation += 2.0 * c[..., np.newaxis, np.newaxis] * np.einsum('ijk,...k->...ij', EPSILON, s)
    rotation += diagonal[..., np.newaxis, np.newaxis] * np.eye(3)
    return rotation


def adjoint_rotation(field: FieldLike, duration: float) -> np.ndarray:
    """
    Bloch-space rotation R with U^dagger sigma_i U = R_ij sigma_j.

    Args:
        field: Total field B = B0 z + b
        duration: Interval length tau >= 0

    Returns:
        3x3 orthogonal matrix with determinant +1
    """
    return adjoint_rotations(_as_array(field), duration)


def is_rotation(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    """Check orthogonality and unit determinant."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (3, 3):
        return False
    orthogonal = np.allclose(matrix.T @ matrix, np.eye(3), atol=tol, rtol=0.0)
    return orthogonal and abs(np.linalg.det(matrix) - 1.0) <= tol
