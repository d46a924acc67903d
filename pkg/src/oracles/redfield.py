"""Second-order (Redfield) relaxation rates for piecewise-constant noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..noise.distributions import NoiseDistribution


@dataclass(frozen=True)
class PerturbativeRates:
    rate1: float
    rate2: float
    k_xx: float
    k_yy: float
    k_zz: float


def spectral_density(b2: float, omega: float, tau: float) -> float:
    """
    k(omega) = 2 int ds e^(-i omega s) C(s) for the piecewise-constant correlation.

    Averaging over the phase of the switching grid turns C(s) into the
    triangle b2 (1 - |s| / tau) on |s| < tau, whose transform gives
    2 b2 tau sinc^2(omega tau / 2).
    """
    # numpy's sinc is sin(pi x) / (pi x)
    return 2.0 * b2 * tau * float(np.sinc(omega * tau / (2.0 * np.pi))) ** 2


def redfield_rates(dist: NoiseDistribution, B0: float, tau: float) -> PerturbativeRates:
    """
    1/T1 = k_xx(w0) + k_yy(w0) and 1/T2 = 1/(2 T1) + k_zz(0), with w0 = 2 B0.

    No check is made that the noise is weak; that is up to the caller.
    """
    if tau < 0:
        raise ValueError(f"Interval length must be non-negative, got {tau}")

    mom = dist.moments()
    omega0 = 2.0 * B0
    k_xx = spectral_density(mom.bx2, omega0, tau)
    k_yy = spectral_density(mom.by2, omega0, tau)
    k_zz = spectral_density(mom.bz2, 0.0, tau)
    rate1 = k_xx + k_yy
    return PerturbativeRates(rate1=rate1, rate2=rate1 / 2.0 + k_zz, k_xx=k_xx, k_yy=k_yy, k_zz=k_zz)
