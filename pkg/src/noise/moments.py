"""Second and fourth moments of a field distribution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MomentSet:
    """Averages of even powers of the field components (odd moments assumed zero)."""
    bx2: float = 0.0
    by2: float = 0.0
    bz2: float = 0.0
    bx4: float = 0.0
    by4: float = 0.0
    bz4: float = 0.0
    bx2by2: float = 0.0
    bx2bz2: float = 0.0
    by2bz2: float = 0.0

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"Moment {name} must be finite and non-negative, got {value}")

    @classmethod
    def from_points(cls, points: np.ndarray, weights: np.ndarray) -> MomentSet:
        """Weighted moments of a finite set of field vectors."""
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        weights = np.asarray(weights, dtype=float)
        sq = points ** 2
        second = weights @ sq
        fourth = weights @ sq ** 2
        return cls(
            bx2=second[0], by2=second[1], bz2=second[2],
            bx4=fourth[0], by4=fourth[1], bz4=fourth[2],
            bx2by2=weights @ (sq[:, 0] * sq[:, 1]),
            bx2bz2=weights @ (sq[:, 0] * sq[:, 2]),
            by2bz2=weights @ (sq[:, 1] * sq[:, 2]),
        )

    def as_dict(self) -> dict[str, float]:
        return {
            'bx2': self.bx2, 'by2': self.by2, 'bz2': self.bz2,
            'bx4': self.bx4, 'by4': self.by4, 'bz4': self.bz4,
            'bx2by2': self.bx2by2, 'bx2bz2': self.bx2bz2, 'by2bz2': self.by2bz2,
        }

    @property
    def total_second(self) -> float:
        """b^2 averaged over all three components."""
        return self.bx2 + self.by2 + self.bz2

    @property
    def transverse_second(self) -> float:
        """b_xy^2 = bx^2 + by^2."""
        return self.bx2 + self.by2

    def satisfies_cauchy_schwarz(self, rel_tol: float = 1e-12) -> bool:
        pairs = [
            (self.bx2by2, self.bx4, self.by4),
            (self.bx2bz2, self.bx4, self.bz4),
            (self.by2bz2, self.by4, self.bz4),
        ]
        return all(c ** 2 <= a * b * (1.0 + rel_tol) + 1e-300 for c, a, b in pairs)
