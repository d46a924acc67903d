"""Asymptotic relaxation rates from the correlated transfer operator."""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg

from ..errors import DecoherenceError
from ..transfer.relaxation import DampingClass, RelaxationReport, decay_rate, precession_angle
from ..transfer.spectrum import REAL_TOL
from .s_matrix import SMatrix

logger = logging.getLogger(__name__)


DEFAULT_TRANSIENT_CUT = 0.5

# Eigenvector weight on the (n=1) axis components needed for a T1 or T2 label
LABEL_WEIGHT = 0.9


def physical_count(moduli: np.ndarray, transient_cut: float) -> int:
    """
    Number of leading modes (by descending |d|) that are physical.

    The physical cluster ends at the widest gap in |d| whose upper side is
    still at or above transient_cut; transients sitting just above the cut
    stay on the far side of that gap.
    """
    ranked = np.sort(np.asarray(moduli, dtype=float))[::-1]
    eligible = int(np.count_nonzero(ranked >= transient_cut))
    if eligible == 0:
        return 0
    ranked = np.append(ranked, 0.0)
    gaps = ranked[:eligible] - ranked[1:eligible + 1]
    return int(np.argmax(gaps)) + 1


class NoSurvivingModesError(DecoherenceError):
    """Raised when every eigenvalue of S falls below the transient cut."""
    pass


def _label(vector: np.ndarray) -> str:
    weights = np.abs(vector) ** 2
    weights = weights / weights.sum()
    if weights[2] >= LABEL_WEIGHT:
        return "T1"
    if weights[0] + weights[1] >= LABEL_WEIGHT:
        return "T2"
    logger.warning(
        f"Mode with z-weight {weights[2]:.3f} and xy-weight {weights[0] + weights[1]:.3f} "
        f"is ambiguous; labeling it T1/T2"
    )
    return "T1/T2"


def asymptotic_rates(
    S: SMatrix,
    tau: float,
    transient_cut: float = DEFAULT_TRANSIENT_CUT,
) -> RelaxationReport:
    """
    Long-time relaxation rates of a correlated chain.

    Eigenvalues of S with |d| below transient_cut are transients and dropped,
    as are those above the cut but below the widest gap in |d| (see
    physical_count). The survivors are labeled T1 or T2 by where their
    eigenvector weight sits among the (n=1) components.

    Args:
        S: Correlated transfer operator
        tau: Interval length (> 0)
        transient_cut: Modulus threshold in (0, 1)

    Returns:
        RelaxationReport over the surviving modes, T1 first

    Raises:
        NoSurvivingModesError: If no eigenvalue reaches transient_cut
    """
    if not 0.0 < transient_cut < 1.0:
        raise ValueError(f"Transient cut must lie in (0, 1), got {transient_cut}")
    if tau <= 0:
        raise ValueError(f"Interval length must be positive, got {tau}")

    values, vectors = scipy.linalg.eig(S.matrix)
    near_real = np.abs(values.imag) < REAL_TOL * np.maximum(1.0, np.abs(values))
    values = np.where(near_real, values.real, values)

    moduli = np.abs(values)
    n_keep = physical_count(moduli, transient_cut)
    if n_keep == 0:
        raise NoSurvivingModesError(
            f"No eigenvalue of S reaches |d| >= {transient_cut} "
            f"(largest {moduli.max():.4f}); parameters are outside the decoherence limit"
        )

    keep = np.argsort(-moduli, kind="stable")[:n_keep]
    labels = [_label(vectors[:, k]) for k in keep]
    # T1 first, then descending |d|, Im > 0 first within a conjugate pair
    order = sorted(range(n_keep), key=lambda i: (labels[i] != "T1", -round(moduli[keep[i]], 12), -values[keep[i]].imag))
    keep = keep[order]
    labels = [labels[i] for i in order]

    survivors = values[keep]
    results = [decay_rate(d, tau) for d in survivors]

    transverse = [d for d, tag in zip(survivors, labels) if "T2" in tag and d.imag > 0]
    omega = precession_angle(transverse[0]) / tau if transverse else 0.0

    dropped = int(np.count_nonzero(moduli >= transient_cut)) - n_keep
    logger.debug(f"S spectrum moduli {np.sort(moduli)[::-1]}; kept {n_keep}, dropped {dropped} above the cut")

    return RelaxationReport(
        eigenvalues=survivors,
        rates=np.array([rate for rate, _ in results]),
        labels=tuple(labels),
        flags=tuple(flag for _, flag in results),
        precession_frequency=omega,
        damping=DampingClass.UNDERDAMPED if transverse else DampingClass.OVERDAMPED,
        eigenvectors=vectors[:, keep],
        tau=tau,
    )
