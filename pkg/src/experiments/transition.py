"""Anisotropy scan across the underdamped/overdamped transition."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import bisect

from ..config.schema import TransitionConfig
from ..noise import planar_anisotropic
from ..oracles.series import eigenvalue_expansions
from ..transfer import IntegralSet, build_transfer_matrix, classify_damping, compute_integrals, transfer_eigenvalues
from .csv_writer import write_csv
from .sweeps import run_points

logger = logging.getLogger(__name__)


SCAN_COLUMNS = [
    "family", "B0_tau", "b0_over_B0", "anisotropy", "damping_class", "leading_order_class",
    "discriminant", "d1_re", "d1_im", "d2_re", "d2_im", "d3_re", "d3_im",
]

BOUNDARY_COLUMNS = ["B0_tau", "b0_over_B0", "anisotropy", "discriminant_residual"]

BISECT_XTOL = 1e-14


@dataclass(frozen=True)
class TransitionBoundary:
    B0_tau: float
    b0_over_B0: float
    anisotropy: float | None
    discriminant_residual: float | None

    def as_record(self) -> tuple:
        return (self.B0_tau, self.b0_over_B0, self.anisotropy, self.discriminant_residual)


def anisotropic_integrals(B0: float, b0: float, anisotropy: float, tau: float) -> IntegralSet:
    return compute_integrals(planar_anisotropic(b0, anisotropy), B0, tau)


def relative_discriminant(ints: IntegralSet) -> float:
    """4 I_z^2 - (I_xx - I_yy)^2 over 4 I_z^2 + (I_xx - I_yy)^2."""
    scale = 4.0 * ints.Iz ** 2 + (ints.Ixx - ints.Iyy) ** 2
    return ints.damping_discriminant() / scale if scale > 0 else 0.0


def find_boundary(B0: float, b0: float, tau: float, lo: float, hi: float) -> float | None:
    """
    Anisotropy in [lo, hi] where the damping discriminant changes sign, or None.
    """
    def f(a: float) -> float:
        return anisotropic_integrals(B0, b0, a, tau).damping_discriminant()

    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        return None
    return float(bisect(f, lo, hi, xtol=BISECT_XTOL, rtol=BISECT_XTOL))


def run_transition_scan(
    cfg: TransitionConfig,
    out: Path | str | None = None,
    workers: int | None = 1,
) -> tuple[list[tuple], list[TransitionBoundary]]:
    """
    Classify the transverse pair over (b0/B0, anisotropy) and bisect the boundary.

    Writes the scan to out (or cfg.output) and the boundary to <out>_boundary.csv.

    Returns:
        Tuple of (scan records, boundaries)
    """
    tau = cfg.tau
    B0 = cfg.B0_tau / tau
    ratios = [float(x) for x in cfg.b0_over_B0.points()]
    anisotropies = [float(a) for a in cfg.anisotropy.points()]
    points = [(ratio, a) for ratio in ratios for a in anisotropies]
    if cfg.zero_field:
        points += [(np.inf, a) for a in anisotropies]
    logger.info(f"transition: {len(ratios)} field ratios x {len(anisotropies)} anisotropies")

    def compute(point: tuple[float, float]) -> tuple:
        ratio, a = point
        # ratio = inf marks the zero-field row
        static = 0.0 if np.isinf(ratio) else B0
        b0 = max(ratios) * B0 if np.isinf(ratio) else ratio * B0
        dist = planar_anisotropic(b0, a)
        ints = compute_integrals(dist, static, tau)
        values = transfer_eigenvalues(build_transfer_matrix(ints))
        leading = eigenvalue_expansions(dist.moments(), static, tau)

        parts = []
        for d in values:
            parts += [float(d.real), float(d.imag)]
        return (
            dist.family.value, 0.0 if np.isinf(ratio) else cfg.B0_tau, ratio, a,
            classify_damping(ints).value,
            "overdamped" if leading.overdamped else "underdamped",
            ints.damping_discriminant(),
            *parts,
        )

    records = run_points(compute, points, workers)

    lo, hi = min(anisotropies), max(anisotropies)

    def locate(ratio: float) -> TransitionBoundary:
        b0 = ratio * B0
        a_star = find_boundary(B0, b0, tau, lo, hi)
        if a_star is None:
            logger.info(f"b0/B0={ratio}: no transition for anisotropy in [{lo}, {hi}]")
            return TransitionBoundary(cfg.B0_tau, ratio, None, None)

        residual = abs(relative_discriminant(anisotropic_integrals(B0, b0, a_star, tau)))
        if residual > cfg.residual_tol:
            logger.warning(f"b0/B0={ratio}: boundary residual {residual:.3e} exceeds {cfg.residual_tol:g}")
        return TransitionBoundary(cfg.B0_tau, ratio, a_star, residual)

    boundaries = run_points(locate, ratios, workers)

    out = Path(out or cfg.output)
    write_csv(out, SCAN_COLUMNS, records)
    write_csv(boundary_path(out), BOUNDARY_COLUMNS, (b.as_record() for b in boundaries))
    return records, boundaries


def boundary_path(out: Path | str) -> Path:
    out = Path(out)
    return out.with_name(f"{out.stem}_boundary{out.suffix or '.csv'}")
