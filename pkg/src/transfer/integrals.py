"""Noise averages I0, I_i, I_ij that fix the one-interval transfer matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DecoherenceError
from ..noise.distributions import NoiseDistribution, DEFAULT_ORDER
from ..noise.quadrature import QuadratureRule
from ..su2.rotations import su2_params_batch


SUM_RULE_TOL = 1e-9

# Off-diagonal integrals below this count as zero for the block-structure shortcut
SYMMETRY_TOL = 1e-12


class SumRuleError(DecoherenceError):
    """Raised when I0 + tr(I_ij) departs from one."""
    pass


@dataclass(frozen=True, eq=False)
class IntegralSet:
    """
    I0 = <cos^2 B tau>, I_i = <B_hat_i sin B tau cos B tau>, I_ij = <B_hat_i B_hat_j sin^2 B tau>,
    with B = B0 z + b and the average over the noise law.
    """
    I0: float
    Ii: np.ndarray
    Iij: np.ndarray
    B0: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        Ii = np.array(self.Ii, dtype=float).reshape(3)
        Iij = np.array(self.Iij, dtype=float).reshape(3, 3)
        Ii.setflags(write=False)
        Iij.setflags(write=False)
        object.__setattr__(self, 'I0', float(self.I0))
        object.__setattr__(self, 'Ii', Ii)
        object.__setattr__(self, 'Iij', Iij)

    @property
    def Iz(self) -> float:
        return float(self.Ii[2])

    @property
    def Ixx(self) -> float:
        return float(self.Iij[0, 0])

    @property
    def Iyy(self) -> float:
        return float(self.Iij[1, 1])

    @property
    def Izz(self) -> float:
        return float(self.Iij[2, 2])

    @property
    def sum_rule_residual(self) -> float:
        return self.I0 + float(np.trace(self.Iij)) - 1.0

    def is_symmetric_case(self, tol: float = SYMMETRY_TOL) -> bool:
        """True when I_x, I_y, I_xy, I_xz, I_yz all vanish."""
        off = [self.Ii[0], self.Ii[1], self.Iij[0, 1], self.Iij[0, 2], self.Iij[1, 2]]
        return bool(np.all(np.abs(off) <= tol))

    def damping_discriminant(self) -> float:
        """4 I_z^2 - (I_xx - I_yy)^2; positive means the transverse pair is complex."""
        return 4.0 * self.Iz ** 2 - (self.Ixx - self.Iyy) ** 2


def integrals_from_rule(rule: QuadratureRule, B0: float, tau: float) -> IntegralSet:
    """Evaluate the integral set with an explicit quadrature rule."""
    if tau < 0:
        raise ValueError(f"Interval length must be non-negative, got {tau}")

    total = rule.nodes + np.array([0.0, 0.0, B0])
    c, s = su2_params_batch(total, tau)

    ints = IntegralSet(
        I0=rule.integrate(c ** 2),
        Ii=rule.integrate(c[:, np.newaxis] * s),
        Iij=rule.integrate(np.einsum('ki,kj->kij', s, s)),
        B0=B0,
        tau=tau,
    )

    residual = ints.sum_rule_residual
    if abs(residual) > SUM_RULE_TOL:
        raise SumRuleError(f"I0 + tr(I_ij) - 1 = {residual:.3e} at B0={B0}, tau={tau}; quadrature is broken")
    return ints


def compute_integrals(
    dist: NoiseDistribution,
    B0: float,
    tau: float,
    quad: QuadratureRule | None = None,
) -> IntegralSet:
    """
    Compute I0, I_i, I_ij for a noise law.

    Args:
        dist: Noise distribution P(b)
        B0: Static field along z
        tau: Interval length
        quad: Quadrature rule built from dist (default order if omitted)

    Returns:
        IntegralSet satisfying the sum rule

    Raises:
        SumRuleError: If the sum rule fails by more than 1e-9
    """
    if quad is None:
        quad = dist.quadrature(DEFAULT_ORDER)
    return integrals_from_rule(quad, B0, tau)
