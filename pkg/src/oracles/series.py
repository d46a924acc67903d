"""Small-tau expansions of the relaxation rates and eigenvalues."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..noise.moments import MomentSet


@dataclass(frozen=True)
class SeriesRates:
    rate1: float
    rate2: float


@dataclass(frozen=True)
class EigenvalueExpansion:
    d_z: complex
    d_plus: complex
    d_minus: complex
    overdamped: bool


def series_rates(mom: MomentSet, B0: float, tau: float) -> SeriesRates:
    """
    1/T1 and 1/T2 through order tau^3, odd moments assumed zero.

    The tau^3 coefficients are closed forms taken as given; the exact
    eigensolver is the reference wherever the two differ.
    """
    bx2, by2, bz2 = mom.bx2, mom.by2, mom.bz2
    b_plus2 = bx2 + by2
    B02 = B0 ** 2

    rate1 = 2.0 * b_plus2 * tau + (
        2.0 * b_plus2 ** 2
        - (2.0 * B02 * b_plus2 + 2.0 * mom.bx4 + 2.0 * mom.by4 + 2.0 * mom.bx2by2 + mom.bx2bz2 + mom.by2bz2) / 3.0
    ) * tau ** 3

    lead2 = b_plus2 + 2.0 * bz2
    rate2 = lead2 * tau + (
        lead2 ** 2
        - B02 * b_plus2 / 3.0
        + (mom.bx4 + mom.by4 + 2.0 * mom.bz4 + 2.0 * mom.bx2by2 + 3.0 * (mom.bx2bz2 + mom.by2bz2)) / 3.0
        - (bx2 - by2) ** 2 / 2.0
    ) * tau ** 3

    return SeriesRates(rate1=float(rate1), rate2=float(rate2))


def eigenvalue_expansions(mom: MomentSet, B0: float, tau: float) -> EigenvalueExpansion:
    """
    Transfer-matrix eigenvalues to order tau^2.

    A negative radicand gives the real (overdamped) pair.
    """
    d_z = 1.0 - 2.0 * tau ** 2 * (mom.bx2 + mom.by2)
    centre = 1.0 - 2.0 * tau ** 2 * B0 ** 2 - tau ** 2 * (mom.bx2 + mom.by2 + 2.0 * mom.bz2)
    radicand = tau ** 2 * B0 ** 2 - tau ** 4 * (mom.bx2 - mom.by2) ** 2 / 4.0

    if radicand >= 0:
        split = 2j * np.sqrt(radicand)
    else:
        split = 2.0 * np.sqrt(-radicand)

    return EigenvalueExpansion(
        d_z=complex(d_z),
        d_plus=complex(centre + split),
        d_minus=complex(centre - split),
        overdamped=bool(radicand < 0),
    )
