"""Noise laws, correlated kernels, quadrature rules and random streams."""

from .moments import MomentSet
from .quadrature import QuadratureRule, ring_rule, sphere_rule, atom_rule
from .distributions import (
    NoiseFamily,
    NoiseDistribution,
    PlanarRing,
    SphereShell,
    AxisFlip,
    Point,
    Discrete,
    planar_anisotropic,
    make_distribution,
    DEFAULT_ORDER,
)
from .kernels import (
    KernelError,
    SeparableKernel,
    SPWaveMixture,
    kernel_marginal,
    kernel_basis,
    conditional_sample,
)
from .streams import substream, sample

__all__ = [
    'MomentSet',
    'QuadratureRule',
    'ring_rule',
    'sphere_rule',
    'atom_rule',
    'NoiseFamily',
    'NoiseDistribution',
    'PlanarRing',
    'SphereShell',
    'AxisFlip',
    'Point',
    'Discrete',
    'planar_anisotropic',
    'make_distribution',
    'DEFAULT_ORDER',
    'KernelError',
    'SeparableKernel',
    'SPWaveMixture',
    'kernel_marginal',
    'kernel_basis',
    'conditional_sample',
    'substream',
    'sample',
]
