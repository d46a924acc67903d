"""Exact white-noise solution: integrals, transfer matrix, spectrum and rates."""

from .integrals import IntegralSet, SumRuleError, compute_integrals, integrals_from_rule
from .matrix import build_transfer_matrix, largest_singular_value
from .spectrum import (
    Spectrum,
    SpectrumClass,
    DegenerateSpectrumError,
    spectral_decompose,
    closed_form_gap,
    cubic_eigenvalues,
    cubic_discriminant_sign,
    transfer_eigenvalues,
)
from .relaxation import (
    DampingClass,
    RateFlag,
    RelaxationReport,
    decay_rate,
    relaxation_report,
    propagate,
    evolve,
    classify_damping,
)

__all__ = [
    'IntegralSet',
    'SumRuleError',
    'compute_integrals',
    'integrals_from_rule',
    'build_transfer_matrix',
    'largest_singular_value',
    'Spectrum',
    'SpectrumClass',
    'DegenerateSpectrumError',
    'spectral_decompose',
    'closed_form_gap',
    'cubic_eigenvalues',
    'cubic_discriminant_sign',
    'transfer_eigenvalues',
    'DampingClass',
    'RateFlag',
    'RelaxationReport',
    'decay_rate',
    'relaxation_report',
    'propagate',
    'evolve',
    'classify_damping',
]
