"""
Figure sweeps: exact white-noise rates versus field ratio, and correlated
rates versus the kernel mixing parameter.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Callable, Iterable, TypeVar

import numpy as np

from ..config.schema import Fig12Config, Fig3Config
from ..correlated import NoSurvivingModesError, asymptotic_rates, build_s_matrix
from ..errors import InvariantBreachError
from ..noise import NoiseDistribution, SPWaveMixture, make_distribution
from ..oracles.monte_carlo import resolve_workers
from ..transfer import (
    DegenerateSpectrumError,
    build_transfer_matrix,
    classify_damping,
    compute_integrals,
    decay_rate,
    relaxation_report,
    spectral_decompose,
    transfer_eigenvalues,
)
from .csv_writer import write_csv

logger = logging.getLogger(__name__)


EIGENVALUE_BOUND = 1.0 + 1e-9

# Headline normalization per family: b^2 for the ring, b_xy^2 for the sphere
RATE_NORM = {"planar_ring": "b2", "sphere_shell": "bxy", "sp_wave": "b2"}

_Point = TypeVar("_Point")
_Row = TypeVar("_Row")


@dataclass(frozen=True)
class SweepRow:
    """One CSV line; field order is the column order."""
    family: str
    B0_tau: float
    b0_over_B0: float
    r: float | None
    rate1_norm: float
    rate2_norm: float
    rate1: float
    rate2: float
    omega_precession: float
    damping_class: str
    d1_abs: float
    d2_abs: float
    d3_abs: float
    seed: int
    rate1_norm_b2: float
    rate2_norm_b2: float
    rate1_norm_bxy: float
    rate2_norm_bxy: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_record(self) -> tuple:
        return astuple(self)


def _normalize(rate: float, scale2: float, tau: float) -> float:
    if scale2 <= 0:
        return float("nan")
    return rate / (scale2 * tau)


def _make_row(
    family: str,
    B0_tau: float,
    b0_over_B0: float,
    r: float | None,
    rates: tuple[float, float],
    omega: float,
    damping: str,
    moduli: Iterable[float],
    b2: float,
    bxy: float,
    tau: float,
    seed: int,
) -> SweepRow:
    rate1, rate2 = rates
    by_b2 = (_normalize(rate1, b2, tau), _normalize(rate2, b2, tau))
    by_bxy = (_normalize(rate1, bxy, tau), _normalize(rate2, bxy, tau))
    headline = by_b2 if RATE_NORM[family] == "b2" else by_bxy

    moduli = list(moduli)[:3]
    moduli += [float("nan")] * (3 - len(moduli))

    return SweepRow(
        family=family,
        B0_tau=B0_tau,
        b0_over_B0=b0_over_B0,
        r=r,
        rate1_norm=headline[0],
        rate2_norm=headline[1],
        rate1=rate1,
        rate2=rate2,
        omega_precession=omega,
        damping_class=damping,
        d1_abs=moduli[0],
        d2_abs=moduli[1],
        d3_abs=moduli[2],
        seed=seed,
        rate1_norm_b2=by_b2[0],
        rate2_norm_b2=by_b2[1],
        rate1_norm_bxy=by_bxy[0],
        rate2_norm_bxy=by_bxy[1],
    )


def _check_bound(moduli: np.ndarray, context: str) -> None:
    worst = float(np.max(moduli)) if len(moduli) else 0.0
    if worst > EIGENVALUE_BOUND:
        raise InvariantBreachError(f"|d| = {worst:.12g} exceeds 1 + 1e-9 at {context}")


def run_points(compute: Callable[[_Point], _Row], points: list[_Point], workers: int | None) -> list[_Row]:
    """Evaluate every point on a thread pool; results come back in input order."""
    n_workers = max(1, min(resolve_workers(workers), len(points)))
    if n_workers == 1:
        return [compute(p) for p in points]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(compute, points))


def white_noise_rates(
    dist: NoiseDistribution,
    B0: float,
    tau: float,
    order: int,
) -> tuple[np.ndarray, tuple[float, float], float, str]:
    """
    Exact (eigenvalues, (1/T1, 1/T2), omega, damping class) for one white-noise point.
    """
    ints = compute_integrals(dist, B0, tau, dist.quadrature(order))
    T = build_transfer_matrix(ints)
    try:
        report = relaxation_report(spectral_decompose(T), tau, ints)
        rates = (report.rate_longitudinal, report.rate_transverse)
        return report.eigenvalues, rates, report.precession_frequency, report.damping.value
    except DegenerateSpectrumError as e:
        # Defective T: take the z-mode as the eigenvalue closest to T_zz
        logger.warning(f"Defective transfer matrix at B0={B0}, b={dist.scale}: {e}")
        values = transfer_eigenvalues(T)
        z = int(np.argmin(np.abs(values - T[2, 2])))
        rest = [values[k] for k in range(3) if k != z]
        rate1, _ = decay_rate(values[z], tau)
        rate2 = min(decay_rate(d, tau)[0] for d in rest)
        return np.array([values[z]] + rest), (rate1, rate2), 0.0, classify_damping(ints).value


def run_fig12_sweep(cfg: Fig12Config, seed: int, out: Path | str | None = None, workers: int | None = 1) -> list[SweepRow]:
    """
    Exact rates over the (B0 tau, b0/B0) grid for a ring or sphere law.

    Args:
        cfg: fig12 config section
        seed: Recorded in every row
        out: CSV path (defaults to cfg.output)
        workers: Thread count (0 or None = one per CPU)

    Returns:
        Rows in grid order, B0 tau outermost

    Raises:
        InvariantBreachError: If any eigenvalue modulus exceeds 1 + 1e-9
    """
    tau = cfg.tau
    points = [(float(B0_tau), float(ratio)) for B0_tau in cfg.B0_tau for ratio in cfg.b0_over_B0.points()]
    logger.info(f"fig12: {cfg.family}, {len(points)} grid points")

    def compute(point: tuple[float, float]) -> SweepRow:
        B0_tau, ratio = point
        B0 = B0_tau / tau
        dist = make_distribution(cfg.family, b0=ratio * B0)
        values, rates, omega, damping = white_noise_rates(dist, B0, tau, cfg.order)
        moduli = np.abs(values)
        _check_bound(moduli, f"{cfg.family} B0_tau={B0_tau}, b0/B0={ratio}")

        mom = dist.moments()
        return _make_row(
            cfg.family, B0_tau, ratio, None, rates, omega, damping, moduli,
            mom.total_second, mom.transverse_second, tau, seed,
        )

    rows = run_points(compute, points, workers)
    write_csv(out or cfg.output, SweepRow.columns(), (row.as_record() for row in rows))
    return rows


def _in_decoherence_limit(cfg: Fig3Config) -> bool:
    return cfg.B0_tau <= 0.1 and cfg.b0_tau <= 0.1 * cfg.B0_tau


def run_fig3_sweep(cfg: Fig3Config, seed: int, out: Path | str | None = None, workers: int | None = 1) -> list[SweepRow]:
    """
    Correlated asymptotic rates over the r grid.

    A point with no surviving modes is written with NaN rates and damping
    class 'no_survivors'.
    """
    tau = cfg.tau
    B0 = cfg.B0_tau / tau
    b0 = cfg.b0_tau / tau
    if not _in_decoherence_limit(cfg):
        logger.warning(
            f"B0_tau={cfg.B0_tau}, b0_tau={cfg.b0_tau} is outside the decoherence limit "
            f"b0 tau << B0 tau << 1; correlated rates may not be comparable"
        )

    r_values = [float(r) for r in cfg.r.points()]
    logger.info(f"fig3: {len(r_values)} correlation values")

    def compute(r: float) -> SweepRow:
        kernel = SPWaveMixture(b0, r)
        S = build_s_matrix(kernel, B0, tau, kernel.marginal().quadrature(cfg.order))
        nan = float("nan")
        try:
            report = asymptotic_rates(S, tau, cfg.transient_cut)
        except NoSurvivingModesError as e:
            logger.warning(f"r={r}: {e}")
            return _make_row("sp_wave", cfg.B0_tau, b0 / B0, r, (nan, nan), nan, "no_survivors", [], b0 ** 2, b0 ** 2, tau, seed)

        _check_bound(report.moduli, f"sp_wave r={r}")
        return _make_row(
            "sp_wave", cfg.B0_tau, b0 / B0, r,
            (report.rate_longitudinal, report.rate_transverse),
            report.precession_frequency, report.damping.value, report.moduli,
            b0 ** 2, b0 ** 2, tau, seed,
        )

    rows = run_points(compute, r_values, workers)
    write_csv(out or cfg.output, SweepRow.columns(), (row.as_record() for row in rows))
    return rows
