"""
Cross-oracle verification: the exact solvers against quadrature integrity,
direct averaging, Monte Carlo, perturbation theory and small-tau series.
"""

from __future__ import annotations

import logging
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Callable

import numpy as np

from ..config.schema import VerifyConfig
from ..correlated import asymptotic_rates, build_s_matrix, propagate_correlated
from ..errors import DecoherenceError
from ..noise import DEFAULT_ORDER, AxisFlip, NoiseDistribution, Point, PlanarRing, SPWaveMixture, make_distribution
from ..oracles import (
    eigenvalue_expansions,
    lag_correlation,
    monte_carlo_correlated,
    monte_carlo_white,
    redfield_rates,
    series_rates,
)
from ..su2 import BlochVector, adjoint_rotations
from ..transfer import build_transfer_matrix, compute_integrals, evolve, transfer_eigenvalues
from .csv_writer import write_csv
from .sweeps import white_noise_rates

logger = logging.getLogger(__name__)


MOMENT_TOL = 1e-10
SUM_RULE_TOL = 1e-12
AVERAGING_TOL = 1e-12
BOUND_TOL = 1e-10
REDFIELD_TOL = 0.05
SERIES_TOL = 0.02
EXPANSION_TOL = 1e-3
REDUCTION_TOL = 1e-9

# Weak-noise points for the perturbative comparisons, in units of tau
REDFIELD_POINT = (0.05, 0.0025)
SERIES_POINT = (0.1, 0.05)
CORRELATED_POINT = (0.05, 0.005)

INITIAL_STATE = BlochVector(1.0 / np.sqrt(2.0), 0.0, 1.0 / np.sqrt(2.0))

_SECOND = ("bx2", "by2", "bz2")


@dataclass(frozen=True)
class VerifyCheck:
    name: str
    family: str
    B0_tau: float | None
    b0_tau: float | None
    observed: float
    expected: float
    tolerance: float
    passed: bool
    detail: str = ""

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def describe(self) -> str:
        where = f" B0_tau={self.B0_tau:g} b0_tau={self.b0_tau:g}" if self.B0_tau is not None else ""
        text = (
            f"{self.name} [{self.family}]{where}: observed {self.observed:.6g}, "
            f"expected {self.expected:.6g}, tolerance {self.tolerance:.3g}"
        )
        return f"{text} ({self.detail})" if self.detail else text


@dataclass
class VerifyReport:
    checks: list[VerifyCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[VerifyCheck]:
        return [check for check in self.checks if not check.passed]


def _relative(observed: float, expected: float) -> float:
    return abs(observed - expected) / abs(expected) if expected != 0 else abs(observed)


def _distribution(family: str, b0: float, cfg: VerifyConfig) -> NoiseDistribution:
    if family == "point":
        return Point(bx=b0)
    if family == "axis_flip":
        weights = np.asarray(cfg.axis_weights, dtype=float)
        bx, by, bz = b0 * weights / np.linalg.norm(weights)
        return AxisFlip(bx, by, bz)
    if family == "planar_anisotropic":
        return make_distribution(family, b0=b0, anisotropy=cfg.anisotropy)
    return make_distribution(family, b0=b0)


class _Checks:
    """Collects checks, turning solver exceptions into failed entries."""

    def __init__(self):
        self.items: list[VerifyCheck] = []

    def add(self, name: str, family: str, point: tuple[float, float] | None, observed: float,
            expected: float, tolerance: float, passed: bool | None = None, detail: str = "") -> None:
        if passed is None:
            passed = bool(abs(observed - expected) <= tolerance)
        B0_tau, b0_tau = point if point is not None else (None, None)
        check = VerifyCheck(name, family, B0_tau, b0_tau, float(observed), float(expected), float(tolerance), passed, detail)
        logger.debug(check.describe())
        self.items.append(check)

    def guard(self, name: str, family: str, point: tuple[float, float] | None, body: Callable[[], None]) -> None:
        try:
            body()
        except DecoherenceError as e:
            logger.warning(f"{name} [{family}] raised {type(e).__name__}: {e}")
            self.add(name, family, point, float("nan"), 0.0, 0.0, passed=False, detail=f"{type(e).__name__}: {e}")


def _family_checks(checks: _Checks, cfg: VerifyConfig, family: str, point: tuple[float, float], seed: int, workers: int | None) -> None:
    B0, b0 = point
    tau = 1.0
    dist = _distribution(family, b0, cfg)
    rule = dist.quadrature(cfg.order)

    def moments() -> None:
        got, want = rule.moments().as_dict(), dist.moments().as_dict()
        scale = max(dist.scale, 1e-300)
        worst, worst_key = 0.0, ""
        for key, value in want.items():
            power = 2 if key in _SECOND else 4
            err = abs(got[key] - value) / scale ** power
            if err > worst:
                worst, worst_key = err, key
        detail = f"worst moment {worst_key}" if worst_key else ""
        checks.add("quadrature_moments", family, point, worst, 0.0, MOMENT_TOL, detail=detail)

    def sum_rule_and_averaging() -> None:
        ints = compute_integrals(dist, B0, tau, rule)
        checks.add("sum_rule", family, point, abs(ints.sum_rule_residual), 0.0, SUM_RULE_TOL)

        T = build_transfer_matrix(ints)
        direct = rule.integrate(adjoint_rotations(rule.nodes + np.array([0.0, 0.0, B0]), tau))
        checks.add("averaging_oracle", family, point, float(np.max(np.abs(T - direct))), 0.0, AVERAGING_TOL)

        moduli = np.abs(transfer_eigenvalues(T))
        checks.add("eigenvalue_bound", family, point, float(moduli.max()), 1.0, BOUND_TOL,
                   passed=bool(moduli.max() <= 1.0 + BOUND_TOL))

        exact = evolve(T, INITIAL_STATE, cfg.m)
        mc = monte_carlo_white(dist, B0, tau, cfg.m, INITIAL_STATE, cfg.trajectories, seed, workers)
        deviation = mc.deviation(exact)
        k = int(np.argmax(deviation - cfg.n_sigma * mc.std_error))
        checks.add(
            "monte_carlo_white", family, point, float(deviation[k]), 0.0, float(cfg.n_sigma * mc.std_error[k] + 1e-12),
            passed=mc.agrees_with(exact, cfg.n_sigma), detail=f"component {'xyz'[k]}, m={cfg.m}",
        )

    checks.guard("quadrature_moments", family, point, moments)
    checks.guard("sum_rule", family, point, sum_rule_and_averaging)


def _oracle_checks(checks: _Checks, cfg: VerifyConfig, seed: int, workers: int | None) -> None:
    tau = 1.0

    def redfield() -> None:
        B0, b0 = REDFIELD_POINT
        dist = PlanarRing(b0)
        _, (rate1, rate2), _, _ = white_noise_rates(dist, B0, tau, DEFAULT_ORDER)
        pert = redfield_rates(dist, B0, tau)
        checks.add("redfield_rate1", "planar_ring", REDFIELD_POINT, _relative(rate1, pert.rate1), 0.0, REDFIELD_TOL)
        checks.add("redfield_rate2", "planar_ring", REDFIELD_POINT, _relative(rate2, pert.rate2), 0.0, REDFIELD_TOL)
        checks.add("transverse_half_rule", "planar_ring", REDFIELD_POINT, _relative(rate2, rate1 / 2.0), 0.0, REDFIELD_TOL)

    def series() -> None:
        B0, b0 = SERIES_POINT
        dist = PlanarRing(b0)
        values, (rate1, rate2), _, _ = white_noise_rates(dist, B0, tau, DEFAULT_ORDER)
        approx = series_rates(dist.moments(), B0, tau)
        checks.add("series_rate1", "planar_ring", SERIES_POINT, _relative(rate1, approx.rate1), 0.0, SERIES_TOL)
        checks.add("series_rate2", "planar_ring", SERIES_POINT, _relative(rate2, approx.rate2), 0.0, SERIES_TOL)

        B0, b0 = CORRELATED_POINT
        dist = PlanarRing(b0)
        values, _, _, _ = white_noise_rates(dist, B0, tau, DEFAULT_ORDER)
        leading = eigenvalue_expansions(dist.moments(), B0, tau)
        expected = np.array([leading.d_z, leading.d_plus, leading.d_minus])
        checks.add("eigenvalue_expansion", "planar_ring", CORRELATED_POINT,
                   float(np.max(np.abs(values - expected))), 0.0, EXPANSION_TOL)

    def correlated() -> None:
        B0, b0 = CORRELATED_POINT
        white = white_noise_rates(PlanarRing(b0), B0, tau, DEFAULT_ORDER)[1]
        kernel = SPWaveMixture(b0, 0.0)
        report = asymptotic_rates(build_s_matrix(kernel, B0, tau), tau)
        worst = max(
            _relative(report.rate_longitudinal, white[0]),
            _relative(report.rate_transverse, white[1]),
        )
        checks.add("correlated_reduction", "sp_wave", CORRELATED_POINT, worst, 0.0, REDUCTION_TOL, detail="r=0")

        r = cfg.correlated_r
        kernel = SPWaveMixture(b0, r)
        mean, se = lag_correlation(kernel, cfg.trajectories, seed)
        checks.add("lag_correlation", "sp_wave", None, mean, r / 2.0, cfg.n_sigma * se + 1e-12, detail=f"r={r}")

        mc_point = (0.5, 0.05)
        kernel = SPWaveMixture(mc_point[1], r)
        exact = propagate_correlated(kernel, INITIAL_STATE, cfg.m, mc_point[0], tau)
        mc = monte_carlo_correlated(kernel, mc_point[0], tau, cfg.m, INITIAL_STATE, cfg.trajectories, seed, workers)
        deviation = mc.deviation(exact)
        k = int(np.argmax(deviation - cfg.n_sigma * mc.std_error))
        checks.add(
            "monte_carlo_correlated", "sp_wave", mc_point, float(deviation[k]), 0.0,
            float(cfg.n_sigma * mc.std_error[k] + 1e-12), passed=mc.agrees_with(exact, cfg.n_sigma),
            detail=f"r={r}, component {'xyz'[k]}, m={cfg.m}",
        )

    checks.guard("redfield", "planar_ring", REDFIELD_POINT, redfield)
    checks.guard("series", "planar_ring", SERIES_POINT, series)
    checks.guard("correlated", "sp_wave", CORRELATED_POINT, correlated)


def run_verify(cfg: VerifyConfig, seed: int, out: Path | str | None = None, workers: int | None = 1) -> VerifyReport:
    """
    Run every configured check and write an itemized CSV report.

    Args:
        cfg: verify config section
        seed: Master seed for the Monte Carlo checks
        out: CSV path (defaults to cfg.output)
        workers: Monte Carlo thread count (0 or None = one per CPU)

    Returns:
        VerifyReport; report.passed is False on any tolerance breach
    """
    checks = _Checks()
    for family in cfg.families:
        for point in cfg.points:
            logger.info(f"verify: {family} at B0_tau={point.B0_tau}, b0_tau={point.b0_tau}")
            _family_checks(checks, cfg, family, (point.B0_tau, point.b0_tau), seed, workers)

    if cfg.oracle_checks:
        logger.info("verify: perturbative and correlated oracles")
        _oracle_checks(checks, cfg, seed, workers)

    report = VerifyReport(checks.items)
    write_csv(out or cfg.output, VerifyCheck.columns(), (astuple(check) for check in report.checks))
    logger.info(f"verify: {len(report.checks) - len(report.failures)}/{len(report.checks)} checks passed")
    return report
