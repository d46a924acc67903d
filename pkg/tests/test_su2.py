"""Tests for SU(2) exponentials, adjoint rotations and Bloch vectors."""

import numpy as np
import pytest
import scipy.linalg

from src.errors import UnphysicalStateError
from src.su2 import (
    BlochVector,
    FieldVector,
    adjoint_rotation,
    adjoint_rotations,
    bloch_from_density,
    bloch_roundtrip,
    density_from_bloch,
    is_rotation,
    su2_params,
)
from src.su2.bloch import PAULI


def unitary(field, duration):
    """exp(i B . sigma t) by direct matrix exponential."""
    generator = np.einsum('i,ijk->jk', np.asarray(field, dtype=float), PAULI)
    return scipy.linalg.expm(1j * duration * generator)


def rotation_from_unitary(U):
    """R_ij = Tr(U^dagger sigma_i U sigma_j) / 2."""
    return np.array([
        [0.5 * np.trace(U.conj().T @ PAULI[i] @ U @ PAULI[j]).real for j in range(3)]
        for i in range(3)
    ])


class TestSU2Params:
    """Test the c + i s . sigma decomposition."""

    def test_zero_field(self):
        c, s = su2_params(FieldVector(0.0, 0.0, 0.0), 1.0)
        assert c == 1.0
        assert np.all(s == 0.0)

    def test_unit_norm(self):
        c, s = su2_params((0.3, -1.2, 0.7), 0.9)
        assert c ** 2 + s @ s == pytest.approx(1.0, abs=1e-15)

    def test_matches_matrix_exponential(self):
        field, duration = np.array([0.4, -0.2, 1.1]), 0.7
        c, s = su2_params(field, duration)
        expected = unitary(field, duration)
        built = c * np.eye(2) + 1j * np.einsum('i,ijk->jk', s, PAULI)
        np.testing.assert_allclose(built, expected, atol=1e-14)

    def test_small_angle_is_continuous(self):
        field = np.array([3e-8, 0.0, 4e-8])
        c, s = su2_params(field, 1.0)
        np.testing.assert_allclose(s, field, rtol=1e-12)
        assert c == pytest.approx(1.0, abs=1e-14)

    def test_negative_duration(self):
        with pytest.raises(ValueError, match="non-negative"):
            su2_params((0.0, 0.0, 1.0), -0.1)


class TestAdjointRotation:
    """Test the Bloch-space rotation."""

    def test_z_field_rotates_x_into_y(self):
        B0, tau = 0.8, 0.3
        R = adjoint_rotation((0.0, 0.0, B0), tau)
        assert R[0, 1] == pytest.approx(np.sin(2 * B0 * tau), abs=1e-15)
        assert R[0, 0] == pytest.approx(np.cos(2 * B0 * tau), abs=1e-15)
        assert R[2, 2] == pytest.approx(1.0, abs=1e-15)

    def test_zero_duration_is_identity(self):
        np.testing.assert_allclose(adjoint_rotation((1.0, 2.0, 3.0), 0.0), np.eye(3), atol=1e-15)

    @pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
    def test_matches_unitary_conjugation(self, seed):
        rng = np.random.default_rng(seed)
        field = rng.normal(size=3) * 2.0
        duration = rng.uniform(0.0, 3.0)
        np.testing.assert_allclose(
            adjoint_rotation(field, duration),
            rotation_from_unitary(unitary(field, duration)),
            atol=1e-12,
        )

    def test_random_rotations_are_proper(self):
        rng = np.random.default_rng(7)
        fields = rng.normal(size=(200, 3)) * 5.0
        for R in adjoint_rotations(fields, 1.3):
            assert is_rotation(R)

    def test_batch_matches_single(self):
        fields = np.array([[0.1, 0.2, 0.3], [1.0, 0.0, -2.0]])
        batch = adjoint_rotations(fields, 0.5)
        for field, R in zip(fields, batch):
            np.testing.assert_allclose(R, adjoint_rotation(field, 0.5), atol=1e-15)

    @pytest.mark.parametrize("seed", [11, 12, 13])
    def test_composition(self, seed):
        """R(B1) R(B2) is the adjoint action of U(B1) U(B2)."""
        rng = np.random.default_rng(seed)
        field1, field2 = rng.normal(size=(2, 3)) * 1.5
        t1, t2 = rng.uniform(0.1, 2.0, size=2)

        c1, s1 = su2_params(field1, t1)
        c2, s2 = su2_params(field2, t2)
        U1 = c1 * np.eye(2) + 1j * np.einsum('i,ijk->jk', s1, PAULI)
        U2 = c2 * np.eye(2) + 1j * np.einsum('i,ijk->jk', s2, PAULI)

        np.testing.assert_allclose(
            adjoint_rotation(field1, t1) @ adjoint_rotation(field2, t2),
            rotation_from_unitary(U1 @ U2),
            atol=1e-13,
        )

    def test_is_rotation_rejects_reflection(self):
        assert is_rotation(np.diag([1.0, 1.0, -1.0])) is False
        assert is_rotation(np.eye(2)) is False


class TestBlochVector:
    """Test Bloch vectors and density matrices."""

    def test_unphysical_norm(self):
        with pytest.raises(UnphysicalStateError, match="exceeds 1"):
            BlochVector(1.0, 0.5, 0.0)

    def test_rounding_slack(self):
        s = BlochVector(1.0 + 1e-12, 0.0, 0.0)
        assert s.norm > 1.0

    def test_non_finite_field(self):
        with pytest.raises(ValueError, match="finite"):
            FieldVector(np.nan, 0.0, 0.0)

    def test_density_matrix(self):
        rho = density_from_bloch(BlochVector(0.3, -0.4, 0.5))
        assert np.trace(rho).real == pytest.approx(1.0)
        np.testing.assert_allclose(rho, rho.conj().T)
        assert np.all(np.linalg.eigvalsh(rho) >= -1e-15)

    def test_roundtrip(self):
        s = BlochVector(0.6, 0.0, -0.8)
        back = bloch_roundtrip(s)
        np.testing.assert_allclose(back.as_array(), s.as_array(), atol=1e-15)

    def test_pure_up_state(self):
        s = bloch_from_density(np.array([[1.0, 0.0], [0.0, 0.0]]))
        assert s.as_tuple() == pytest.approx((0.0, 0.0, 1.0))

    def test_density_shape(self):
        with pytest.raises(ValueError, match="2x2"):
            bloch_from_density(np.eye(3))
