"""Relaxation rates, precession, propagation and damping classification."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..su2.bloch import BlochVector
from .integrals import IntegralSet
from .matrix import build_transfer_matrix
from .spectrum import (
    DegenerateSpectrumError,
    Spectrum,
    SpectrumClass,
    spectral_decompose,
    transfer_eigenvalues,
)

logger = logging.getLogger(__name__)


# Rate reported for an eigenvalue that is exactly zero, in units of 1/tau
RATE_CAP = 1.0e12

# Largest m for which propagate cross-checks against direct powers
CHECK_MAX_STEPS = 64
CHECK_TOL = 1e-9

# Discriminant band treated as the boundary between the damping regimes
BOUNDARY_TOL = 1e-12

# Transverse eigenvalues closer than this (relative) count as merged
PAIR_MERGE_TOL = 1e-9


class DampingClass(Enum):
    UNDERDAMPED = "underdamped"
    OVERDAMPED = "overdamped"
    BOUNDARY = "boundary"


class RateFlag(Enum):
    OK = "ok"
    NON_DECAYING = "non_decaying"
    ZERO_EIGENVALUE = "zero_eigenvalue"


@dataclass(frozen=True, eq=False)
class RelaxationReport:
    """Decay rates and precession extracted from a set of eigenvalues."""
    eigenvalues: np.ndarray
    rates: np.ndarray
    labels: tuple[str, ...]
    flags: tuple[RateFlag, ...]
    precession_frequency: float
    damping: DampingClass
    eigenvectors: np.ndarray
    tau: float

    def _rates_for(self, label: str) -> np.ndarray:
        return np.array([rate for rate, tag in zip(self.rates, self.labels) if label in tag.split("/")])

    @property
    def rate_longitudinal(self) -> float:
        """1/T1; the slowest mode carrying the T1 label."""
        rates = self._rates_for("T1")
        return float(rates.min()) if len(rates) else float("nan")

    @property
    def rate_transverse(self) -> float:
        """1/T2; the slowest mode carrying the T2 label."""
        rates = self._rates_for("T2")
        return float(rates.min()) if len(rates) else float("nan")

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.eigenvalues)


def decay_rate(d: complex, tau: float) -> tuple[float, RateFlag]:
    """
    -ln|d| / tau, stable when |d| is within 1e-12 of one.

    Returns:
        Tuple of (rate, flag)
    """
    re, im = float(np.real(d)), float(np.imag(d))
    excess = (re - 1.0) * (re + 1.0) + im * im  # |d|^2 - 1
    if excess >= 0.0:
        return 0.0, RateFlag.NON_DECAYING
    if excess <= -1.0:
        return RATE_CAP / tau, RateFlag.ZERO_EIGENVALUE
    return -0.5 * float(np.log1p(excess)) / tau, RateFlag.OK


def precession_angle(d: complex) -> float:
    return abs(float(np.arctan2(np.imag(d), np.real(d))))


def _spectral_damping(spec: Spectrum) -> DampingClass:
    if spec.classification is SpectrumClass.CONJUGATE_PAIR:
        return DampingClass.UNDERDAMPED
    d1, d2 = spec.eigenvalues[1], spec.eigenvalues[2]
    if abs(d1 - d2) <= PAIR_MERGE_TOL * max(1.0, abs(d1)):
        return DampingClass.BOUNDARY
    return DampingClass.OVERDAMPED


def relaxation_report(spec: Spectrum, tau: float, ints: IntegralSet | None = None) -> RelaxationReport:
    """
    Rates 1/T_j = -ln|d_j| / tau with slot 0 longitudinal and slots 1, 2 transverse.

    Args:
        spec: Labeled transfer-matrix spectrum
        tau: Interval length (> 0)
        ints: Integrals T was built from; when given, the damping class comes
            from classify_damping, otherwise from the transverse pair of spec

    Returns:
        RelaxationReport
    """
    if tau <= 0:
        raise ValueError(f"Interval length must be positive, got {tau}")

    results = [decay_rate(d, tau) for d in spec.eigenvalues]
    rates = np.array([rate for rate, _ in results])
    flags = tuple(flag for _, flag in results)

    if spec.classification is SpectrumClass.CONJUGATE_PAIR:
        omega = precession_angle(spec.eigenvalues[1]) / tau
    else:
        omega = 0.0
    damping = classify_damping(ints) if ints is not None else _spectral_damping(spec)

    return RelaxationReport(
        eigenvalues=spec.eigenvalues,
        rates=rates,
        labels=("T1", "T2", "T2"),
        flags=flags,
        precession_frequency=omega,
        damping=damping,
        eigenvectors=spec.vectors,
        tau=tau,
    )


def propagate(spec: Spectrum, s0: BlochVector, m: int, check: bool = False) -> BlochVector:
    """
    Ensemble Bloch vector after m intervals, R^-1 D^m R s0.

    Args:
        spec: Spectrum of the transfer matrix
        s0: Initial Bloch vector
        m: Number of intervals (>= 0)
        check: Compare against T^m s0 when m is small (also on in DEBUG logging)

    Returns:
        BlochVector at time m tau
    """
    if m < 0 or int(m) != m:
        raise ValueError(f"Step count must be a non-negative integer, got {m}")
    m = int(m)
    if m == 0:
        return s0

    state = s0.as_array()
    powers = spec.eigenvalues ** m
    result = (spec.vectors @ (powers * (spec.inverse @ state))).real

    if (check or logger.isEnabledFor(logging.DEBUG)) and m <= CHECK_MAX_STEPS:
        direct = np.linalg.matrix_power(spec.matrix, m) @ state
        gap = float(np.max(np.abs(direct - result)))
        if gap > CHECK_TOL:
            logger.warning(f"Spectral propagation differs from T^{m} s0 by {gap:.3e}; eigenvectors ill-conditioned")

    return BlochVector.from_array(result)


def evolve(T: np.ndarray, s0: BlochVector, m: int) -> BlochVector:
    """propagate with a fallback to direct matrix powers for defective T."""
    try:
        return propagate(spectral_decompose(T), s0, m)
    except DegenerateSpectrumError as e:
        logger.info(f"Falling back to direct powers: {e}")
        return BlochVector.from_array(np.linalg.matrix_power(np.asarray(T, dtype=float), int(m)) @ s0.as_array())


def classify_damping(ints: IntegralSet) -> DampingClass:
    """
    Underdamped iff 4 I_z^2 > (I_xx - I_yy)^2 when the off-diagonal integrals vanish;
    otherwise read off the eigenvalues of T.
    """
    if ints.is_symmetric_case():
        disc = ints.damping_discriminant()
        if disc > BOUNDARY_TOL:
            return DampingClass.UNDERDAMPED
        if disc < -BOUNDARY_TOL:
            return DampingClass.OVERDAMPED
        return DampingClass.BOUNDARY

    values = transfer_eigenvalues(build_transfer_matrix(ints))
    if np.any(values.imag != 0.0):
        return DampingClass.UNDERDAMPED
    return DampingClass.OVERDAMPED
