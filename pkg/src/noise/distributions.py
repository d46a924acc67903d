"""Noise laws P(b) over field vectors: moments, quadrature rules and samplers."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from ..su2.bloch import FieldVector
from .moments import MomentSet
from .quadrature import QuadratureRule, atom_rule, ring_rule, sphere_rule


DEFAULT_ORDER = 64


class NoiseFamily(Enum):
    """Built-in noise families, keyed by their config name."""
    PLANAR_RING = "planar_ring"
    SPHERE_SHELL = "sphere_shell"
    PLANAR_ANISOTROPIC = "planar_anisotropic"
    AXIS_FLIP = "axis_flip"
    POINT = "point"
    DISCRETE = "discrete"


class NoiseDistribution:
    """Base class for a probability law over field vectors."""

    family: NoiseFamily

    def moments(self) -> MomentSet:
        raise NotImplementedError

    def quadrature(self, order: int = DEFAULT_ORDER) -> QuadratureRule:
        raise NotImplementedError

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw size i.i.d. fields as an (size, 3) array."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator) -> FieldVector:
        return FieldVector.from_array(self.sample_many(rng, 1)[0])

    @property
    def scale(self) -> float:
        """Largest field magnitude on the support."""
        raise NotImplementedError


def _check_magnitude(name: str, value: float) -> None:
    if not np.isfinite(value) or value < 0:
        raise ValueError(f"{name} must be finite and non-negative, got {value}")


@dataclass(frozen=True)
class PlanarRing(NoiseDistribution):
    """|b| = b0 in the xy plane with uniform azimuth."""
    b0: float
    family: NoiseFamily = field(default=NoiseFamily.PLANAR_RING, init=False)

    def __post_init__(self):
        _check_magnitude("b0", self.b0)

    def moments(self) -> MomentSet:
        b2, b4 = self.b0 ** 2, self.b0 ** 4
        return MomentSet(
            bx2=b2 / 2, by2=b2 / 2,
            bx4=3 * b4 / 8, by4=3 * b4 / 8,
            bx2by2=b4 / 8,
        )

    def quadrature(self, order: int = DEFAULT_ORDER) -> QuadratureRule:
        return ring_rule(self.b0, order)

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return ring_points(self.b0, rng.uniform(0.0, 2.0 * np.pi, size))

    @property
    def scale(self) -> float:
        return self.b0


@dataclass(frozen=True)
class SphereShell(NoiseDistribution):
    """|b| = b0 with uniformly distributed direction."""
    b0: float
    family: NoiseFamily = field(default=NoiseFamily.SPHERE_SHELL, init=False)

    def __post_init__(self):
        _check_magnitude("b0", self.b0)

    def moments(self) -> MomentSet:
        b2, b4 = self.b0 ** 2, self.b0 ** 4
        return MomentSet(
            bx2=b2 / 3, by2=b2 / 3, bz2=b2 / 3,
            bx4=b4 / 5, by4=b4 / 5, bz4=b4 / 5,
            bx2by2=b4 / 15, bx2bz2=b4 / 15, by2bz2=b4 / 15,
        )

    def quadrature(self, order: int = DEFAULT_ORDER) -> QuadratureRule:
        return sphere_rule(self.b0, order)

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        mu = rng.uniform(-1.0, 1.0, size)
        phi = rng.uniform(0.0, 2.0 * np.pi, size)
        rho = np.sqrt(1.0 - mu ** 2)
        return self.b0 * np.column_stack([rho * np.cos(phi), rho * np.sin(phi), mu])

    @property
    def scale(self) -> float:
        return self.b0


@dataclass(frozen=True)
class AxisFlip(NoiseDistribution):
    """b = (+-bx, +-by, +-bz) with independent equiprobable signs."""
    bx: float
    by: float
    bz: float = 0.0
    family: NoiseFamily = field(default=NoiseFamily.AXIS_FLIP)

    def __post_init__(self):
        for name in ("bx", "by", "bz"):
            _check_magnitude(name, getattr(self, name))

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.bx, self.by, self.bz], dtype=float)

    def moments(self) -> MomentSet:
        x2, y2, z2 = self.amplitudes ** 2
        return MomentSet(
            bx2=x2, by2=y2, bz2=z2,
            bx4=x2 ** 2, by4=y2 ** 2, bz4=z2 ** 2,
            bx2by2=x2 * y2, bx2bz2=x2 * z2, by2bz2=y2 * z2,
        )

    def quadrature(self, order: int = DEFAULT_ORDER) -> QuadratureRule:
        signs = np.array([[sx, sy, sz] for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)], dtype=float)
        return atom_rule(signs * self.amplitudes, np.full(8, 1.0 / 8), self.family.value)

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        signs = rng.choice(np.array([-1.0, 1.0]), size=(size, 3))
        return signs * self.amplitudes

    @property
    def scale(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def planar_anisotropic(b0: float, anisotropy: float) -> AxisFlip:
    """
    In-plane two-axis law with bx^2 + by^2 = b0^2 and bx^2 - by^2 = anisotropy * b0^2.

    Args:
        b0: In-plane field magnitude
        anisotropy: Value in [0, 1]; 0 is in-plane isotropic, 1 is a single axis

    Returns:
        AxisFlip with bz = 0 tagged as planar_anisotropic
    """
    _check_magnitude("b0", b0)
    if not 0.0 <= anisotropy <= 1.0:
        raise ValueError(f"Anisotropy must lie in [0, 1], got {anisotropy}")
    return AxisFlip(
        bx=b0 * np.sqrt((1.0 + anisotropy) / 2.0),
        by=b0 * np.sqrt((1.0 - anisotropy) / 2.0),
        bz=0.0,
        family=NoiseFamily.PLANAR_ANISOTROPIC,
    )


@dataclass(frozen=True)
class Point(NoiseDistribution):
    """Deterministic field."""
    bx: float = 0.0
    by: float = 0.0
    bz: float = 0.0
    family: NoiseFamily = field(default=NoiseFamily.POINT, init=False)

    def __post_init__(self):
        FieldVector(self.bx, self.by, self.bz)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.bx, self.by, self.bz], dtype=float)

    def moments(self) -> MomentSet:
        return MomentSet.from_points(self.vector, np.ones(1))

    def quadrature(self, order: int = DEFAULT_ORDER) -> QuadratureRule:
        return atom_rule(self.vector, np.ones(1), self.family.value)

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.tile(self.vector, (size, 1))

    @property
    def scale(self) -> float:
        return float(np.linalg.norm(self.vector))


@dataclass(frozen=True, eq=False)
class Discrete(NoiseDistribution):
    """Finitely many atoms b_i with probabilities w_i."""
    atoms: np.ndarray
    weights: np.ndarray
    family: NoiseFamily = field(default=NoiseFamily.DISCRETE, init=False)

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=float).reshape(-1, 3)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if len(atoms) != len(weights) or len(atoms) == 0:
            raise ValueError(f"Discrete law needs matching non-empty atoms and weights, got {len(atoms)} and {len(weights)}")
        if np.any(weights < 0):
            raise ValueError("Discrete weights must be non-negative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"Discrete weights must sum to 1, got {weights.sum():.16g}")
        if not np.all(np.isfinite(atoms)):
            raise ValueError("Discrete atoms must be finite")
        weights = weights / weights.sum()
        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'weights', weights)

    def moments(self) -> MomentSet:
        return MomentSet.from_points(self.atoms, self.weights)

    def quadrature(self, order: int = DEFAULT_ORDER) -> QuadratureRule:
        return atom_rule(self.atoms, self.weights, self.family.value)

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        index = rng.choice(len(self.weights), size=size, p=self.weights)
        return self.atoms[index]

    @property
    def scale(self) -> float:
        return float(np.linalg.norm(self.atoms, axis=1).max())


def ring_points(b0: float, phi: np.ndarray) -> np.ndarray:
    """Field vectors b0 (cos phi, sin phi, 0)."""
    phi = np.asarray(phi, dtype=float)
    return b0 * np.stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)], axis=-1)


def make_distribution(family: str | NoiseFamily, **params: Any) -> NoiseDistribution:
    """
    Build a distribution from its config name and parameters.

    Args:
        family: Family name, e.g. 'planar_ring'
        **params: Family parameters (b0, anisotropy, bx/by/bz, atoms/weights)

    Returns:
        NoiseDistribution instance

    Raises:
        ValueError: On unknown family or missing/extra parameters
    """
    family = NoiseFamily(family)
    builders = {
        NoiseFamily.PLANAR_RING: PlanarRing,
        NoiseFamily.SPHERE_SHELL: SphereShell,
        NoiseFamily.PLANAR_ANISOTROPIC: planar_anisotropic,
        NoiseFamily.AXIS_FLIP: AxisFlip,
        NoiseFamily.POINT: Point,
        NoiseFamily.DISCRETE: Discrete,
    }
    try:
        return builders[family](**params)
    except TypeError as e:
        raise ValueError(f"Bad parameters for {family.value}: {e}") from e
