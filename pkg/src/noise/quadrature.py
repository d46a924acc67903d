"""Quadrature rules over noise-field supports."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .moments import MomentSet


WEIGHT_SUM_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """
    Nodes and weights realizing an average over P(b).

    Weights are non-negative and sum to one, so integrating a constant
    returns it exactly.
    """
    nodes: np.ndarray
    weights: np.ndarray
    order: int = 1
    family: str = field(default="discrete")

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).reshape(-1, 3)
        weights = np.array(self.weights, dtype=float).reshape(-1)

        if len(nodes) != len(weights):
            raise ValueError(f"Got {len(nodes)} nodes but {len(weights)} weights")
        if len(nodes) == 0:
            raise ValueError("Quadrature rule needs at least one node")
        if np.any(weights < 0):
            raise ValueError("Quadrature weights must be non-negative")
        if abs(weights.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"Quadrature weights sum to {weights.sum():.16g}, expected 1")
        if not np.all(np.isfinite(nodes)):
            raise ValueError("Quadrature nodes must be finite")

        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, 'nodes', nodes)
        object.__setattr__(self, 'weights', weights)

    def __len__(self) -> int:
        return len(self.weights)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Weighted sum over the leading (node) axis of values."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def moments(self) -> MomentSet:
        return MomentSet.from_points(self.nodes, self.weights)


def ring_rule(b0: float, order: int, family: str = "planar_ring") -> QuadratureRule:
    """Equally weighted azimuth nodes on the circle |b| = b0, bz = 0."""
    _check_order(order)
    phi = 2.0 * np.pi * np.arange(order) / order
    nodes = b0 * np.column_stack([np.cos(phi), np.sin(phi), np.zeros(order)])
    return QuadratureRule(nodes, np.full(order, 1.0 / order), order, family)


def sphere_rule(b0: float, order: int) -> QuadratureRule:
    """
    Gauss-Legendre in cos(theta) times uniform azimuth on the sphere |b| = b0.

    Order n uses n azimuth nodes and max(1, n // 2) polar nodes.
    """
    _check_order(order)
    n_phi = order
    n_theta = max(1, order // 2)

    mu, mu_weights = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    mu_grid, phi_grid = np.meshgrid(mu, phi, indexing='ij')
    sin_theta = np.sqrt(1.0 - mu_grid ** 2)

    nodes = b0 * np.column_stack([
        (sin_theta * np.cos(phi_grid)).ravel(),
        (sin_theta * np.sin(phi_grid)).ravel(),
        mu_grid.ravel(),
    ])
    weights = np.outer(mu_weights / 2.0, np.full(n_phi, 1.0 / n_phi)).ravel()
    # leggauss weights carry rounding at the 1e-16 level per node
    weights = weights / weights.sum()
    return QuadratureRule(nodes, weights, order, "sphere_shell")


def atom_rule(atoms: np.ndarray, weights: np.ndarray, family: str = "discrete") -> QuadratureRule:
    """Exact rule for a distribution with finitely many atoms."""
    return QuadratureRule(atoms, weights, len(np.atleast_1d(weights)), family)


def _check_order(order: int) -> None:
    if int(order) != order or order < 1:
        raise ValueError(f"Quadrature order must be a positive integer, got {order}")
