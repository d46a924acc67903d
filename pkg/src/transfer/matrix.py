"""Assembly of the 3x3 transfer matrix from the integral set."""

import numpy as np

from .integrals import IntegralSet


def build_transfer_matrix(ints: IntegralSet) -> np.ndarray:
    """
    Noise-averaged adjoint action of one interval.

    sigma_i(tau) = T_ij sigma_j(0) in the ensemble mean.
    """
    I0 = ints.I0
    Ix, Iy, Iz = ints.Ii
    Iij = ints.Iij
    Ixx, Iyy, Izz = Iij[0, 0], Iij[1, 1], Iij[2, 2]
    Ixy, Ixz, Iyz = Iij[0, 1], Iij[0, 2], Iij[1, 2]

    return np.array([
        [I0 + Ixx - Iyy - Izz, 2 * Ixy + 2 * Iz, 2 * Ixz - 2 * Iy],
        [2 * Ixy - 2 * Iz, I0 - Ixx + Iyy - Izz, 2 * Iyz + 2 * Ix],
        [2 * Ixz + 2 * Iy, 2 * Iyz - 2 * Ix, I0 - Ixx - Iyy + Izz],
    ])


def largest_singular_value(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix, ord=2))
