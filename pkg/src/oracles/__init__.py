"""Independent reference calculations: Monte Carlo, Redfield theory and small-tau series."""

from .monte_carlo import (
    MonteCarloResult,
    monte_carlo_white,
    monte_carlo_correlated,
    lag_correlation,
    resolve_workers,
)
from .redfield import PerturbativeRates, redfield_rates, spectral_density
from .series import SeriesRates, EigenvalueExpansion, series_rates, eigenvalue_expansions

__all__ = [
    'MonteCarloResult',
    'monte_carlo_white',
    'monte_carlo_correlated',
    'lag_correlation',
    'resolve_workers',
    'PerturbativeRates',
    'redfield_rates',
    'spectral_density',
    'SeriesRates',
    'EigenvalueExpansion',
    'series_rates',
    'eigenvalue_expansions',
]
