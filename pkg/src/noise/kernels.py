"""
Separable nearest-neighbour correlation kernels P(b, b') = sum_n p_n(b) p_n(b').

The only family is the s/p-wave mixture on the ring |b| = b0, bz = 0:

    P(phi, phi') = (1 + r cos(phi - phi')) / 2 pi
    p_1 = 1/sqrt(2 pi),  p_2 = sqrt(r / 2 pi) cos phi,  p_3 = sqrt(r / 2 pi) sin phi

Basis functions take the azimuth phi. Internally the chain is run against
the uniform probability measure on the ring, where the basis reads
q_n = sqrt(2 pi) p_n and the transition density is sum_n q_n(b) q_n(b').
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from ..errors import DecoherenceError
from ..su2.bloch import FieldVector
from .distributions import NoiseDistribution, PlanarRing, ring_points
from .quadrature import QuadratureRule

BasisFunction = Callable[[np.ndarray], np.ndarray]

# Points in the tabulated inverse CDF of the angular step
CDF_TABLE_SIZE = 4096

# Tolerance on the ring support and on the transition normalization
SUPPORT_TOL = 1e-9
NORMALIZATION_TOL = 1e-12


class KernelError(DecoherenceError):
    """Raised when a kernel or its quadrature is inconsistent."""
    pass


class SeparableKernel:
    """Base class for separable nearest-neighbour kernels."""

    family: str = ""

    @property
    def n_basis(self) -> int:
        return len(self.basis())

    def marginal(self) -> NoiseDistribution:
        raise NotImplementedError

    def basis(self) -> list[BasisFunction]:
        raise NotImplementedError

    def basis_values(self, rule: QuadratureRule) -> np.ndarray:
        """Measure-normalized basis q_n at the rule nodes, shape (N, K)."""
        raise NotImplementedError

    def conditional_sample_many(self, previous: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def conditional_sample(self, previous: FieldVector, rng: np.random.Generator) -> FieldVector:
        drawn = self.conditional_sample_many(previous.as_array()[np.newaxis, :], rng)
        return FieldVector.from_array(drawn[0])

    def transition_density(self, rule: QuadratureRule) -> np.ndarray:
        """K(b_k, b_l) against the rule's measure, shape (K, K)."""
        q = self.basis_values(rule)
        return q.T @ q

    def marginal_normalization(self, rule: QuadratureRule) -> np.ndarray:
        """sum_l w_l K(b_k, b_l) for every node k; equals 1 for a valid kernel."""
        return self.transition_density(rule) @ rule.weights


@dataclass(frozen=True)
class SPWaveMixture(SeparableKernel):
    """Mixture of s-wave and p-wave angular correlation between successive intervals."""
    b0: float
    r: float
    family: str = "sp_wave"

    def __post_init__(self):
        if not np.isfinite(self.b0) or self.b0 < 0:
            raise KernelError(f"b0 must be finite and non-negative, got {self.b0}")
        if not 0.0 <= self.r <= 1.0:
            raise KernelError(f"Correlation r must lie in [0, 1], got {self.r}")

    def marginal(self) -> PlanarRing:
        return PlanarRing(self.b0)

    def basis(self) -> list[BasisFunction]:
        norm0 = np.sqrt(1.0 / (2.0 * np.pi))
        norm1 = np.sqrt(self.r / (2.0 * np.pi))
        return [
            lambda phi: np.full_like(np.asarray(phi, dtype=float), norm0),
            lambda phi: norm1 * np.cos(phi),
            lambda phi: norm1 * np.sin(phi),
        ]

    def density(self, phi: np.ndarray, phi_prime: np.ndarray) -> np.ndarray:
        """P(phi, phi') per unit angle."""
        return (1.0 + self.r * np.cos(np.asarray(phi) - np.asarray(phi_prime))) / (2.0 * np.pi)

    def azimuths(self, rule: QuadratureRule) -> np.ndarray:
        """Azimuth of every node; raises if a node is off the ring."""
        nodes = rule.nodes
        scale = max(self.b0, 1.0)
        off_ring = np.abs(np.linalg.norm(nodes[:, :2], axis=1) - self.b0) > SUPPORT_TOL * scale
        if np.any(off_ring) or np.any(np.abs(nodes[:, 2]) > SUPPORT_TOL * scale):
            raise KernelError(f"Quadrature nodes are not on the ring |b| = {self.b0}, bz = 0")
        return np.arctan2(nodes[:, 1], nodes[:, 0])

    def basis_values(self, rule: QuadratureRule) -> np.ndarray:
        phi = self.azimuths(rule)
        return np.sqrt(2.0 * np.pi) * np.array([p(phi) for p in self.basis()])

    @cached_property
    def _step_table(self) -> tuple[np.ndarray, np.ndarray]:
        # CDF of delta = phi - phi_prev on [-pi, pi) with density (1 + r cos delta) / 2 pi
        delta = np.linspace(-np.pi, np.pi, CDF_TABLE_SIZE)
        cdf = (delta + np.pi + self.r * np.sin(delta)) / (2.0 * np.pi)
        cdf[0], cdf[-1] = 0.0, 1.0
        return cdf, delta

    def sample_steps(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw angular steps phi - phi_prev by inverse CDF."""
        cdf, delta = self._step_table
        return np.interp(rng.uniform(0.0, 1.0, size), cdf, delta)

    def conditional_sample_many(self, previous: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        previous = np.asarray(previous, dtype=float).reshape(-1, 3)
        phi_prev = np.arctan2(previous[:, 1], previous[:, 0])
        return ring_points(self.b0, phi_prev + self.sample_steps(rng, len(previous)))


def kernel_marginal(kernel: SeparableKernel) -> NoiseDistribution:
    return kernel.marginal()


def kernel_basis(kernel: SeparableKernel) -> list[BasisFunction]:
    return kernel.basis()


def conditional_sample(kernel: SeparableKernel, previous: FieldVector, rng: np.random.Generator) -> FieldVector:
    return kernel.conditional_sample(previous, rng)
