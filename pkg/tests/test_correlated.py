"""Tests for the correlated-noise transfer operator."""

import numpy as np
import pytest

from src.correlated import (
    NoSurvivingModesError,
    asymptotic_rates,
    boundary_vectors,
    build_s_matrix,
    physical_count,
    pointwise_transfer,
    pointwise_transfers,
    propagate_correlated,
)
from src.noise import KernelError, PlanarRing, SPWaveMixture, ring_rule
from src.su2 import BlochVector, FieldVector, adjoint_rotation
from src.transfer import (
    build_transfer_matrix,
    compute_integrals,
    propagate,
    relaxation_report,
    spectral_decompose,
    transfer_eigenvalues,
)

# Decoherence-limit point used throughout, in units of tau
B0_TAU = 0.05
B0_SMALL = 0.005


def white_rates(b0, B0, tau=1.0):
    T = build_transfer_matrix(compute_integrals(PlanarRing(b0), B0, tau))
    report = relaxation_report(spectral_decompose(T), tau)
    return report.rate_longitudinal, report.rate_transverse


def correlated_rates(r, B0=B0_TAU, b0=B0_SMALL, tau=1.0):
    report = asymptotic_rates(build_s_matrix(SPWaveMixture(b0, r), B0, tau), tau)
    return report.rate_longitudinal, report.rate_transverse


class TestPointwiseTransfer:
    """Test the un-averaged transfer matrix."""

    def test_zero_noise_is_z_rotation(self):
        np.testing.assert_allclose(
            pointwise_transfer(FieldVector(0.0, 0.0, 0.0), 0.4, 0.5),
            adjoint_rotation((0.0, 0.0, 0.4), 0.5),
            atol=1e-15,
        )

    def test_zero_tau_is_identity(self):
        np.testing.assert_allclose(pointwise_transfer(FieldVector(0.3, 0.1, 0.2), 1.0, 0.0), np.eye(3), atol=1e-15)

    def test_matches_adjoint_rotation(self):
        b = FieldVector(0.3, -0.6, 0.1)
        np.testing.assert_allclose(
            pointwise_transfer(b, 0.7, 1.2),
            adjoint_rotation(b.as_array() + [0.0, 0.0, 0.7], 1.2),
            atol=1e-14,
        )

    def test_average_reproduces_transfer_matrix(self):
        dist = PlanarRing(0.8)
        rule = dist.quadrature(64)
        averaged = rule.integrate(pointwise_transfers(rule.nodes, 0.5, 1.0))
        T = build_transfer_matrix(compute_integrals(dist, 0.5, 1.0, rule))
        np.testing.assert_allclose(averaged, T, atol=1e-12)


class TestSMatrix:
    """Test construction of S."""

    def test_shape_and_indexing(self):
        S = build_s_matrix(SPWaveMixture(0.1, 0.5), 0.2, 1.0)
        assert S.matrix.shape == (9, 9)
        assert S.n_basis == 3
        assert S.element(1, 'x', 2, 'y') == S.matrix[1, 4]
        np.testing.assert_array_equal(S.block(1, 2), S.matrix[3:6, 6:9])

    def test_uncorrelated_reduction(self):
        b0, B0 = 0.3, 0.4
        S = build_s_matrix(SPWaveMixture(b0, 0.0), B0, 1.0)
        T = build_transfer_matrix(compute_integrals(PlanarRing(b0), B0, 1.0))
        np.testing.assert_allclose(S.block(0, 0), T, atol=1e-14)
        assert np.all(S.matrix[3:, :] == 0.0)
        assert np.all(S.matrix[:, 3:] == 0.0)

    def test_zero_tau_gram(self):
        r = 0.6
        S = build_s_matrix(SPWaveMixture(1.0, r), 0.5, 0.0)
        expected = np.diag([1.0, 1.0, 1.0] + [r / 2] * 6)
        np.testing.assert_allclose(S.matrix, expected, atol=1e-13)

    def test_leading_order_elements(self):
        r = 0.5
        S = build_s_matrix(SPWaveMixture(B0_SMALL, r), B0_TAU, 1.0)
        assert 1.0 - S.element(1, 'x', 1, 'x') == pytest.approx(2 * B0_TAU ** 2 + B0_SMALL ** 2, rel=0.01)
        assert S.element(1, 'x', 1, 'y') == pytest.approx(2 * B0_TAU, rel=0.01)
        assert S.element(2, 'z', 2, 'z') == pytest.approx(r / 2 * (1 - 2 * B0_SMALL ** 2), rel=0.01)

    def test_eigenvalue_bound(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            r, B0, b0 = rng.uniform(0, 1), rng.uniform(0, 3), rng.uniform(0, 3)
            S = build_s_matrix(SPWaveMixture(b0, r), B0, 1.0)
            assert np.max(np.abs(np.linalg.eigvals(S.matrix))) <= 1.0 + 1e-9

    def test_spectrum_contains_white_spectrum(self):
        b0, B0 = 0.2, 0.3
        S = build_s_matrix(SPWaveMixture(b0, 0.0), B0, 1.0)
        T = build_transfer_matrix(compute_integrals(PlanarRing(b0), B0, 1.0))
        values = np.linalg.eigvals(S.matrix)
        nonzero = values[np.abs(values) > 1e-12]
        assert len(nonzero) == 3
        for d in transfer_eigenvalues(T):
            assert np.min(np.abs(nonzero - d)) < 1e-10

    def test_unnormalized_grid(self):
        with pytest.raises(KernelError, match="not normalized"):
            build_s_matrix(SPWaveMixture(1.0, 0.5), 0.1, 1.0, ring_rule(1.0, 1))

    def test_boundary_vectors(self):
        kernel = SPWaveMixture(0.2, 0.7)
        ends = boundary_vectors(kernel, BlochVector(0.0, 0.0, 1.0), 0.3, 1.0)
        np.testing.assert_allclose(ends.exit_weights, [1.0, 0.0, 0.0], atol=1e-14)
        assert ends.entry.shape == (9,)


class TestAsymptoticRates:
    """Test the long-time rates of the correlated chain."""

    def test_uncorrelated_matches_white_noise(self):
        rate1, rate2 = correlated_rates(0.0)
        white1, white2 = white_rates(B0_SMALL, B0_TAU)
        assert rate1 == pytest.approx(white1, rel=1e-9)
        assert rate2 == pytest.approx(white2, rel=1e-9)

    def test_uncorrelated_endpoint(self):
        rate1, rate2 = correlated_rates(0.0)
        assert rate1 / B0_SMALL ** 2 == pytest.approx(2.0, rel=0.02)
        assert rate2 / B0_SMALL ** 2 == pytest.approx(1.0, rel=0.02)

    def test_fully_forward_endpoint(self):
        """A direct 128-point discretization of the chain gives 5.879 and 2.939."""
        rate1, rate2 = correlated_rates(1.0)
        assert rate1 / B0_SMALL ** 2 == pytest.approx(5.9, rel=0.10)
        assert rate2 / B0_SMALL ** 2 == pytest.approx(2.9, rel=0.10)
        assert rate2 == pytest.approx(rate1 / 2.0, rel=0.05)

    def test_monotone_in_r(self):
        rates = [correlated_rates(r) for r in (0.0, 0.25, 0.5, 0.75, 1.0)]
        longitudinal = [r1 for r1, _ in rates]
        transverse = [r2 for _, r2 in rates]
        assert longitudinal == sorted(longitudinal)
        assert transverse == sorted(transverse)

    def test_labels(self):
        report = asymptotic_rates(build_s_matrix(SPWaveMixture(B0_SMALL, 0.5), B0_TAU, 1.0), 1.0)
        assert report.labels[0] == "T1"
        assert report.labels.count("T2") == 2
        assert report.precession_frequency == pytest.approx(2 * B0_TAU, rel=0.01)

    @pytest.mark.parametrize("r", [0.0, 0.5, 1.0])
    def test_three_modes_survive(self, r):
        report = asymptotic_rates(build_s_matrix(SPWaveMixture(B0_SMALL, r), B0_TAU, 1.0), 1.0)
        assert report.labels == ("T1", "T2", "T2")
        assert np.all(report.moduli > 0.999)

    def test_fully_forward_transients_dropped(self):
        """Six transients sit near |d| = 0.5, some of them just above the default cut."""
        S = build_s_matrix(SPWaveMixture(B0_SMALL, 1.0), B0_TAU, 1.0)
        moduli = np.sort(np.abs(np.linalg.eigvals(S.matrix)))[::-1]
        np.testing.assert_allclose(moduli[3:], 0.5, atol=0.01)

        report = asymptotic_rates(S, 1.0)
        assert len(report.eigenvalues) == 3
        assert report.moduli[1] == pytest.approx(report.moduli[2], abs=1e-12)
        assert report.eigenvalues[1].imag > 0 > report.eigenvalues[2].imag

    def test_no_survivors(self):
        S = build_s_matrix(SPWaveMixture(0.5, 0.0), 0.5, 1.0)
        with pytest.raises(NoSurvivingModesError, match="decoherence limit"):
            asymptotic_rates(S, 1.0, transient_cut=0.95)

    def test_bad_cut(self):
        S = build_s_matrix(SPWaveMixture(0.1, 0.0), 0.1, 1.0)
        with pytest.raises(ValueError, match="Transient cut"):
            asymptotic_rates(S, 1.0, transient_cut=1.5)


class TestPropagateCorrelated:
    """Test the full chain contraction."""

    def test_uncorrelated_matches_white_propagation(self):
        b0, B0 = 0.2, 0.3
        s0 = BlochVector(0.6, 0.0, 0.8)
        T = build_transfer_matrix(compute_integrals(PlanarRing(b0), B0, 1.0))
        spec = spectral_decompose(T)
        for m in (1, 5, 30):
            got = propagate_correlated(SPWaveMixture(b0, 0.0), s0, m, B0, 1.0)
            np.testing.assert_allclose(got.as_array(), propagate(spec, s0, m).as_array(), atol=1e-10)

    def test_single_interval_sees_marginal(self):
        b0, B0 = 0.4, 0.2
        s0 = BlochVector(0.0, 1.0, 0.0)
        T = build_transfer_matrix(compute_integrals(PlanarRing(b0), B0, 1.0))
        got = propagate_correlated(SPWaveMixture(b0, 0.9), s0, 1, B0, 1.0)
        np.testing.assert_allclose(got.as_array(), T @ s0.as_array(), atol=1e-13)

    def test_linear_in_initial_state(self):
        kernel = SPWaveMixture(0.3, 0.7)
        u, v = BlochVector(1.0, 0.0, 0.0), BlochVector(0.0, 0.0, 1.0)
        mixed = BlochVector(0.5, 0.0, 0.5)
        f = lambda s: propagate_correlated(kernel, s, 12, 0.4, 1.0).as_array()
        np.testing.assert_allclose(f(mixed), 0.5 * f(u) + 0.5 * f(v), atol=1e-12)

    def test_zero_steps(self):
        with pytest.raises(ValueError, match="positive integer"):
            propagate_correlated(SPWaveMixture(0.1, 0.5), BlochVector(0.0, 0.0, 1.0), 0, 0.1, 1.0)


class TestPhysicalCount:
    """Test the split between physical modes and transients."""

    def test_transients_just_above_cut(self):
        moduli = [0.99993, 0.99985, 0.99985, 0.50004, 0.50004, 0.50002, 0.50002, 0.4998, 0.4998]
        assert physical_count(moduli, 0.5) == 3

    def test_transients_below_cut(self):
        assert physical_count([1.0, 0.6, 0.6, 0.0, 0.0, 0.0], 0.5) == 3

    def test_gap_inside_eligible_modes(self):
        assert physical_count([0.9, 0.3, 0.3], 0.5) == 1
        assert physical_count([0.95, 0.94, 0.55, 0.52], 0.5) == 2

    def test_none_eligible(self):
        assert physical_count([0.4, 0.2], 0.5) == 0
