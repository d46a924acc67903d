"""
Transfer operator for nearest-neighbour correlated noise.

With P(b, b') = sum_n q_n(b) q_n(b') against the marginal measure mu, the
chain average contracts to

    sigma(m tau) = sum_n w_n [S^(m-1) e]_n,
    S_(n,i),(n',j) = E_mu[q_n T_ij q_n'],  w_n = E_mu[q_n],  e_(n,j) = E_mu[q_n (T s0)_j]

Composite index (n, i) maps to 3 n + i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..noise.distributions import DEFAULT_ORDER
from ..noise.kernels import KernelError, SeparableKernel, NORMALIZATION_TOL
from ..noise.quadrature import QuadratureRule, atom_rule
from ..su2.bloch import BlochVector, FieldVector
from ..su2.rotations import adjoint_rotations
from ..transfer.integrals import integrals_from_rule
from ..transfer.matrix import build_transfer_matrix


@dataclass(frozen=True, eq=False)
class SMatrix:
    matrix: np.ndarray
    n_basis: int
    B0: float
    tau: float

    def block(self, n: int, n_prime: int) -> np.ndarray:
        """3x3 block coupling basis functions n and n' (zero-based)."""
        return self.matrix[3 * n:3 * n + 3, 3 * n_prime:3 * n_prime + 3]

    def element(self, n: int, i: str, n_prime: int, j: str) -> float:
        """S_(n i),(n' j) with one-based n and axis letters, e.g. element(1, 'x', 1, 'y')."""
        axes = {'x': 0, 'y': 1, 'z': 2}
        return float(self.matrix[3 * (n - 1) + axes[i], 3 * (n_prime - 1) + axes[j]])


@dataclass(frozen=True, eq=False)
class BoundaryVectors:
    exit_weights: np.ndarray
    entry: np.ndarray


def pointwise_transfer(b: FieldVector, B0: float, tau: float) -> np.ndarray:
    """Un-averaged T(b) from the single-point integral table."""
    rule = atom_rule(b.as_array(), np.ones(1))
    return build_transfer_matrix(integrals_from_rule(rule, B0, tau))


def pointwise_transfers(nodes: np.ndarray, B0: float, tau: float) -> np.ndarray:
    """T(b) at every node, shape (K, 3, 3)."""
    return adjoint_rotations(np.asarray(nodes, dtype=float) + np.array([0.0, 0.0, B0]), tau)


def _kernel_rule(kernel: SeparableKernel, quad: QuadratureRule | None) -> QuadratureRule:
    return quad if quad is not None else kernel.marginal().quadrature(DEFAULT_ORDER)


def _checked_basis(kernel: SeparableKernel, rule: QuadratureRule) -> np.ndarray:
    q = kernel.basis_values(rule)

    normalization = (q.T @ q) @ rule.weights
    worst = float(np.max(np.abs(normalization - 1.0)))
    if worst > NORMALIZATION_TOL:
        raise KernelError(f"Kernel marginal is not normalized on the quadrature grid (off by {worst:.3e})")

    if np.min(q.T @ q) < -NORMALIZATION_TOL:
        raise KernelError("Kernel is negative somewhere on the quadrature grid")
    return q


def build_s_matrix(
    kernel: SeparableKernel,
    B0: float,
    tau: float,
    quad: QuadratureRule | None = None,
) -> SMatrix:
    """
    Build the 3N x 3N correlated transfer operator by quadrature.

    Raises:
        KernelError: If the kernel is not normalized or not non-negative on the grid
    """
    if tau < 0:
        raise ValueError(f"Interval length must be non-negative, got {tau}")

    rule = _kernel_rule(kernel, quad)
    q = _checked_basis(kernel, rule)
    transfers = pointwise_transfers(rule.nodes, B0, tau)

    blocks = np.einsum('k,nk,mk,kij->nimj', rule.weights, q, q, transfers)
    size = 3 * q.shape[0]
    return SMatrix(matrix=blocks.reshape(size, size), n_basis=q.shape[0], B0=B0, tau=tau)


def boundary_vectors(
    kernel: SeparableKernel,
    s0: BlochVector,
    B0: float,
    tau: float,
    quad: QuadratureRule | None = None,
) -> BoundaryVectors:
    rule = _kernel_rule(kernel, quad)
    q = _checked_basis(kernel, rule)
    applied = pointwise_transfers(rule.nodes, B0, tau) @ s0.as_array()

    return BoundaryVectors(
        exit_weights=q @ rule.weights,
        entry=np.einsum('k,nk,kj->nj', rule.weights, q, applied).reshape(-1),
    )


def propagate_correlated(
    kernel: SeparableKernel,
    s0: BlochVector,
    m: int,
    B0: float,
    tau: float,
    quad: QuadratureRule | None = None,
) -> BlochVector:
    """
    Ensemble Bloch vector after m correlated intervals.

    Args:
        kernel: Separable nearest-neighbour kernel
        s0: Initial Bloch vector
        m: Number of intervals (>= 1)
        B0: Static field along z
        tau: Interval length
        quad: Quadrature over the kernel support

    Returns:
        BlochVector at time m tau
    """
    if m < 1 or int(m) != m:
        raise ValueError(f"Step count must be a positive integer, got {m}")

    S = build_s_matrix(kernel, B0, tau, quad)
    ends = boundary_vectors(kernel, s0, B0, tau, quad)

    chained = np.linalg.matrix_power(S.matrix, int(m) - 1) @ ends.entry
    result = ends.exit_weights @ chained.reshape(S.n_basis, 3)
    return BlochVector.from_array(result)
