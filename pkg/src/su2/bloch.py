"""Field and Bloch vector value types, and density-matrix conversion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..errors import UnphysicalStateError


# Pauli matrices in (x, y, z) order
PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

IDENTITY2 = np.eye(2, dtype=complex)

# Slack on |s| <= 1 for states produced by floating-point arithmetic
NORM_SLACK = 1e-9


@dataclass(frozen=True)
class FieldVector:
    """A random or static field in angular-frequency units (hbar = 1)."""
    bx: float
    by: float
    bz: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.bx, self.by, self.bz])):
            raise ValueError(f"Field components must be finite, got {self.as_tuple()}")

    @classmethod
    def from_array(cls, values: Iterable[float]) -> FieldVector:
        bx, by, bz = (float(v) for v in values)
        return cls(bx, by, bz)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.bx, self.by, self.bz)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True)
class BlochVector:
    """Expectation values (<sx>, <sy>, <sz>) of the Pauli operators."""
    sx: float
    sy: float
    sz: float

    def __post_init__(self):
        norm = self.norm
        if not np.isfinite(norm):
            raise UnphysicalStateError(f"Bloch vector has non-finite components: {self.as_tuple()}")
        if norm > 1.0 + NORM_SLACK:
            raise UnphysicalStateError(f"Bloch vector norm {norm:.12g} exceeds 1")

    @classmethod
    def from_array(cls, values: Iterable[float]) -> BlochVector:
        sx, sy, sz = (float(v) for v in values)
        return cls(sx, sy, sz)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.sx, self.sy, self.sz)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.sx ** 2 + self.sy ** 2 + self.sz ** 2))


def density_from_bloch(s: BlochVector) -> np.ndarray:
    """Return rho = (E + s . sigma) / 2."""
    return 0.5 * (IDENTITY2 + np.einsum('i,ijk->jk', s.as_array(), PAULI))


def bloch_from_density(rho: np.ndarray) -> BlochVector:
    """Return s_i = Tr(rho sigma_i)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"Density matrix must be 2x2, got shape {rho.shape}")
    values = np.einsum('jk,ikj->i', rho, PAULI).real
    return BlochVector.from_array(values)


def bloch_roundtrip(s: BlochVector) -> BlochVector:
    return bloch_from_density(density_from_bloch(s))
