"""
Eigen-decomposition of the 3x3 transfer matrix.

T = V D V^-1, so R = V^-1 diagonalizes T as D = R T R^-1; the rows of R are
left eigenvectors and the columns of V = R^-1 are right eigenvectors.
Slot 0 holds the eigenvalue whose right eigenvector leans most on z (the
longitudinal mode); slots 1 and 2 hold the transverse pair, Im > 0 first.

Eigenvalues come from LAPACK. The closed-form roots of the characteristic
cubic are a cross-check only, run on every decomposition: forming the
polynomial coefficients amplifies rounding by 1 / |(d1 - d2)(d1 - d3)|,
and near a triple root the error grows like the cube root of machine
precision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from ..errors import DecoherenceError

logger = logging.getLogger(__name__)


# |Im d| below this (times max(1, |d|)) counts as real
REAL_TOL = 1e-10

# Condition number of the eigenvector matrix above which T is treated as defective
DEFECTIVE_COND = 1e10

# Relative off-diagonal residual allowed in R T R^-1
DIAGONAL_TOL = 1e-9

# Cubic discriminant below this (times scale^3) is ill-conditioned for Cardano
CARDANO_TOL = 1e-10

# Gap between closed-form and LAPACK eigenvalues that is logged as a warning
CROSS_CHECK_TOL = 1e-4


class DegenerateSpectrumError(DecoherenceError):
    """Raised when T is not diagonalizable within tolerance."""
    pass


class SpectrumClass(Enum):
    THREE_REAL = "three_real"
    CONJUGATE_PAIR = "one_real_plus_conjugate_pair"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues, eigenvector matrices and classification of a transfer matrix."""
    matrix: np.ndarray
    eigenvalues: np.ndarray
    vectors: np.ndarray
    inverse: np.ndarray
    classification: SpectrumClass

    @property
    def R(self) -> np.ndarray:
        """Matrix whose rows are left eigenvectors."""
        return self.inverse

    @property
    def R_inv(self) -> np.ndarray:
        return self.vectors

    @property
    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    def diagonal_residual(self) -> float:
        """Largest off-diagonal entry of R T R^-1 relative to the largest eigenvalue."""
        D = self.inverse @ self.matrix @ self.vectors
        off = D - np.diag(np.diag(D))
        return float(np.max(np.abs(off)) / max(1.0, self.max_modulus))


def _clean_real(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=complex)
    near_real = np.abs(values.imag) < REAL_TOL * np.maximum(1.0, np.abs(values))
    values[near_real] = values[near_real].real
    return values


def _label_order(values: np.ndarray, vectors: np.ndarray) -> list[int]:
    units = vectors / np.linalg.norm(vectors, axis=0)
    z_weight = np.abs(units[2])
    modulus = np.abs(values)

    first = min(range(3), key=lambda k: (-round(z_weight[k], 12), -modulus[k]))
    rest = [k for k in range(3) if k != first]
    if values[rest[0]].imag != 0.0 or values[rest[1]].imag != 0.0:
        rest.sort(key=lambda k: -values[k].imag)
    else:
        rest.sort(key=lambda k: (-modulus[k], -values[k].real))
    return [first] + rest


def spectral_decompose(T: np.ndarray) -> Spectrum:
    """
    Diagonalize a 3x3 transfer matrix.

    Args:
        T: Real 3x3 matrix

    Returns:
        Spectrum with labeled eigenvalues

    Raises:
        DegenerateSpectrumError: If T is defective within tolerance
    """
    T = np.asarray(T, dtype=float)
    if T.shape != (3, 3) or not np.all(np.isfinite(T)):
        raise ValueError(f"Transfer matrix must be a finite 3x3 array, got shape {T.shape}")

    values, vectors = scipy.linalg.eig(T)
    values = _clean_real(values)

    cond = np.linalg.cond(vectors)
    if not np.isfinite(cond) or cond > DEFECTIVE_COND:
        raise DegenerateSpectrumError(f"Eigenvector matrix condition {cond:.3e}; T is defective within tolerance")

    order = _label_order(values, vectors)
    values = values[order]
    vectors = vectors[:, order]

    has_pair = bool(np.any(values.imag != 0.0))
    spectrum = Spectrum(
        matrix=T,
        eigenvalues=values,
        vectors=vectors,
        inverse=np.linalg.inv(vectors),
        classification=SpectrumClass.CONJUGATE_PAIR if has_pair else SpectrumClass.THREE_REAL,
    )

    residual = spectrum.diagonal_residual()
    if residual > DIAGONAL_TOL:
        raise DegenerateSpectrumError(f"R T R^-1 off-diagonal residual {residual:.3e}")

    gap = closed_form_gap(T, values)
    if gap > CROSS_CHECK_TOL:
        logger.warning(f"Closed-form and LAPACK eigenvalues differ by {gap:.3e}")
    else:
        logger.debug(f"Closed-form vs LAPACK eigenvalue gap {gap:.3e}")

    return spectrum


def characteristic_coefficients(T: np.ndarray) -> tuple[float, float, float]:
    """(a, b, c) with det(lambda - T) = lambda^3 - a lambda^2 + b lambda - c."""
    T = np.asarray(T, dtype=float)
    a = float(np.trace(T))
    b = 0.5 * (a ** 2 - float(np.trace(T @ T)))
    c = float(np.linalg.det(T))
    return a, b, c


def _depressed_cubic(T: np.ndarray) -> tuple[float, float, float, bool]:
    """(p, q, discriminant, well_conditioned) of t^3 + p t + q after lambda = t + a/3."""
    a, b, c = characteristic_coefficients(T)
    p = b - a ** 2 / 3.0
    q = -2.0 * a ** 3 / 27.0 + a * b / 3.0 - c
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    scale = max(1.0, float(np.max(np.abs(T))))
    return p, q, disc, abs(disc) >= CARDANO_TOL * scale ** 3


def cubic_eigenvalues(T: np.ndarray) -> np.ndarray:
    """
    Eigenvalues of a 3x3 matrix from its characteristic cubic.

    Cardano's formula when the discriminant is well away from zero,
    otherwise the companion-matrix roots.
    """
    a, b, c = characteristic_coefficients(T)
    shift = a / 3.0
    p, q, disc, well_conditioned = _depressed_cubic(T)
    if not well_conditioned:
        return np.roots([1.0, -a, b, -c]).astype(complex)

    if disc > 0:
        root = np.sqrt(disc)
        u = np.cbrt(-q / 2.0 + root)
        v = np.cbrt(-q / 2.0 - root)
        real = -(u + v) / 2.0
        imag = np.sqrt(3.0) / 2.0 * (u - v)
        roots = np.array([u + v, real + 1j * imag, real - 1j * imag])
    else:
        m = 2.0 * np.sqrt(-p / 3.0)
        theta = np.arccos(np.clip(3.0 * q / (p * m), -1.0, 1.0)) / 3.0
        roots = m * np.cos(theta - 2.0 * np.pi * np.arange(3) / 3.0)

    return np.asarray(roots, dtype=complex) + shift


def closed_form_gap(T: np.ndarray, values: np.ndarray) -> float:
    """Largest distance from an eigenvalue in values to the nearest closed-form root."""
    closed = cubic_eigenvalues(T)
    return float(max(np.min(np.abs(closed - d)) for d in values))


def cubic_discriminant_sign(T: np.ndarray) -> int:
    """+1 for a complex pair, -1 for three distinct real roots, 0 when ill-conditioned."""
    _, _, disc, well_conditioned = _depressed_cubic(T)
    if not well_conditioned:
        return 0
    return 1 if disc > 0 else -1


def transfer_eigenvalues(T: np.ndarray) -> np.ndarray:
    """
    Eigenvalues only, sorted by imaginary part descending then modulus.

    Unlike spectral_decompose this never fails on defective matrices, which
    occur exactly at the overdamped transition.
    """
    values = _clean_real(scipy.linalg.eigvals(np.asarray(T, dtype=float)))
    order = sorted(range(3), key=lambda k: (-values[k].imag, -abs(values[k])))
    return values[order]
