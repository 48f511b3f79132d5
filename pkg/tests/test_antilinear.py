"""
Unit tests for Hermitian anti-linear operators.
Tests the determinant identity, the span construction, transformation laws and Takagi factors.
"""

import pytest
import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np

from antilinear import (
    AntiHermOp, conjugate_action, pairing, pairing_amplitudes, square, takagi, theta_det_abs,
    theta_from_channel, theta_from_pair, theta_scale, transform_pair,
)
from channels import KrausChannel, degenerate_channel, depolarizing, extremal_channel, output_det_pure
from exceptions import InvariantViolation, SpanTooLarge
from linalg2 import DensityOp
from seed_data import (
    random_density, random_disc_matrix, random_kraus_pair, random_pure_amplitudes,
    near_parallel_channel, random_pure_state, random_span_channel, random_symmetric,
)


@pytest.mark.unit
class TestAntiHermOp:
    """Test suite for the value type."""

    def test_from_matrix_rejects_asymmetric(self):
        """Test a non-symmetric matrix is rejected."""
        with pytest.raises(InvariantViolation):
            AntiHermOp.from_matrix([[1, 0.5], [0.2, 1]])

    def test_from_matrix_round_trip(self, rng):
        """Test from_matrix keeps the matrix."""
        m = random_symmetric(rng)
        assert np.allclose(AntiHermOp.from_matrix(m).matrix, m)

    def test_rejects_nan(self):
        """Test NaN entries are rejected."""
        with pytest.raises(InvariantViolation):
            AntiHermOp(np.nan, 0, 0)

    def test_apply_is_antilinear(self, rng):
        """Test θ(c x) = conj(c) θ x."""
        theta = AntiHermOp.from_matrix(random_symmetric(rng))
        x = rng.normal(size=2) + 1j * rng.normal(size=2)
        c = 0.3 - 1.2j
        assert np.allclose(theta.apply(c * x), np.conj(c) * theta.apply(x))

    def test_hermitian(self, rng):
        """Test <x, θ y> = <y, θ x>."""
        theta = AntiHermOp.from_matrix(random_symmetric(rng))
        x = rng.normal(size=2) + 1j * rng.normal(size=2)
        y = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert np.vdot(x, theta.apply(y)) == pytest.approx(np.vdot(y, theta.apply(x)))

    def test_adjoint_is_self(self, rng):
        """Test <x, θ y> = <y, θ^dagger x> with θ^dagger = θ."""
        theta = AntiHermOp.from_matrix(random_symmetric(rng))
        adjoint = theta.adjoint()
        assert np.array_equal(adjoint.matrix, theta.matrix)
        for _ in range(20):
            x = rng.normal(size=2) + 1j * rng.normal(size=2)
            y = rng.normal(size=2) + 1j * rng.normal(size=2)
            assert np.vdot(x, theta.apply(y)) == pytest.approx(np.vdot(y, adjoint.apply(x)))

    def test_pairing_matches_apply(self, rng):
        """Test pairing equals <phi, θ phi> computed from apply."""
        theta = AntiHermOp.from_matrix(random_symmetric(rng))
        phi = random_pure_state(rng)
        assert pairing(theta, phi) == pytest.approx(np.vdot(phi.amplitudes, theta.apply(phi.amplitudes)))


@pytest.mark.unit
class TestPairIdentity:
    """Test suite for det(A pi A^dagger + B pi B^dagger) = |<phi, θ phi>|^2."""

    def test_random_pairs(self, rng):
        """Test the identity on random unnormalized pairs and random pure states."""
        amplitudes = random_pure_amplitudes(rng, 200)
        for _ in range(500):
            a, b = random_kraus_pair(rng)
            theta = theta_from_pair(a, b)
            dets = output_det_pure(KrausChannel((a, b)), amplitudes)
            assert np.allclose(dets, np.abs(pairing_amplitudes(theta, amplitudes)) ** 2, atol=1e-12)

    def test_extremal_grid(self):
        """Test extremal pairs give Theta = diag(a00 b10, -a11 b01) conjugated."""
        for u in np.linspace(0.0, np.pi / 2, 20):
            for v in np.linspace(0.0, np.pi / 2, 20):
                channel = extremal_channel(np.cos(u), np.cos(v), np.sin(v), np.sin(u))
                theta = theta_from_pair(*channel.kraus)
                assert abs(theta.alpha - np.cos(u) * np.sin(u)) < 1e-14
                assert abs(theta.delta + np.cos(v) * np.sin(v)) < 1e-14
                assert abs(theta.beta) < 1e-14

    def test_degenerate_theta(self):
        """Test the degenerate channel gives alpha = beta = 0 and delta = -sqrt(t(1-t))."""
        t = 0.5
        theta = theta_from_pair(*degenerate_channel(t).kraus)
        assert theta.alpha == 0
        assert theta.beta == 0
        assert theta.delta == pytest.approx(-np.sqrt(t * (1 - t)))

    def test_tensor_identity(self, rng):
        """Test (A x B - B x A)(phi x phi) = conj(<phi, θ phi>)(|01> - |10>)."""
        singlet = np.array([0.0, 1.0, -1.0, 0.0])
        for _ in range(1000):
            a, b = random_kraus_pair(rng)
            theta = theta_from_pair(a, b)
            phi = random_pure_state(rng)
            vec = np.kron(phi.amplitudes, phi.amplitudes)
            lhs = (np.kron(a, b) - np.kron(b, a)) @ vec
            assert np.allclose(lhs, np.conj(pairing(theta, phi)) * singlet, atol=1e-13)

    def test_identical_operators_give_zero(self, rng):
        """Test θ(A, A) = 0."""
        a = random_disc_matrix(rng)
        theta = theta_from_pair(a, a)
        assert np.allclose(theta.matrix, 0.0, atol=1e-15)


@pytest.mark.unit
class TestConjugateAction:
    """Test suite for θ rho θ and the determinant."""

    def test_degenerate_example(self):
        """Test θ rho θ = diag(0, s rho11 s) for Theta = diag(0, -s)."""
        s = 0.5
        theta = AntiHermOp(0, 0, -s)
        rho = DensityOp.from_bloch([0.3, 0.2, -0.4])
        expected = np.diag([0.0, s * s * rho.mat[1, 1].real])
        assert np.allclose(conjugate_action(theta, rho), expected)

    def test_positive_semidefinite(self, rng):
        """Test θ rho θ is positive for random θ and rho."""
        for _ in range(50):
            theta = AntiHermOp.from_matrix(random_symmetric(rng))
            out = conjugate_action(theta, random_density(rng))
            assert np.min(np.linalg.eigvalsh(out)) > -1e-14

    def test_pure_trace_is_pairing(self, rng):
        """Test tr(pi θ pi θ) = |<phi, θ phi>|^2."""
        for _ in range(50):
            theta = AntiHermOp.from_matrix(random_symmetric(rng))
            phi = random_pure_state(rng)
            value = np.real(np.trace(phi.projector @ conjugate_action(theta, phi.density)))
            assert value == pytest.approx(abs(pairing(theta, phi)) ** 2, abs=1e-13)

    def test_det_abs(self, rng):
        """Test |det Theta| = sqrt(det θ^2)."""
        for _ in range(20):
            theta = AntiHermOp.from_matrix(random_symmetric(rng))
            det_sq = np.linalg.det(square(theta))
            assert det_sq.imag == pytest.approx(0.0, abs=1e-14)
            assert theta_det_abs(theta) == pytest.approx(np.sqrt(det_sq.real), abs=1e-13)


@pytest.mark.unit
class TestThetaFromChannel:
    """Test suite for the span construction."""

    def test_two_kraus_matches_pair(self, rng):
        """Test a two-operator channel gives θ(A, B) itself."""
        for _ in range(20):
            a, b = random_kraus_pair(rng)
            theta = theta_from_channel(KrausChannel((a, b)))
            assert np.allclose(theta.matrix, theta_from_pair(a, b).matrix, atol=1e-12)

    def test_identity_is_zero(self, identity):
        """Test a span of dimension one gives θ = 0."""
        assert np.allclose(theta_from_channel(identity).matrix, 0.0)

    def test_split_operator(self):
        """Test splitting B into B cos u, B sin u keeps |<phi, θ phi>|."""
        a, b = degenerate_channel(0.3).kraus
        u = 0.4
        theta = theta_from_channel(KrausChannel((a, np.cos(u) * b, np.sin(u) * b)))
        assert np.allclose(np.abs(theta.matrix), np.abs(theta_from_pair(a, b).matrix), atol=1e-12)

    def test_span_channels_satisfy_identity(self, rng):
        """Test det T(pi) = |<phi, θ' phi>|^2 for channels with three or four Kraus operators."""
        amplitudes = random_pure_amplitudes(rng, 200)
        for _ in range(100):
            channel = random_span_channel(rng)
            theta = theta_from_channel(channel)
            dets = output_det_pure(channel, amplitudes)
            assert np.allclose(dets, np.abs(pairing_amplitudes(theta, amplitudes)) ** 2, atol=1e-10)

    def test_reordering_keeps_modulus(self, rng):
        """Test reversing the Kraus order changes θ by at most a phase."""
        amplitudes = random_pure_amplitudes(rng, 50)
        channel = random_span_channel(rng, count=4)
        reversed_channel = KrausChannel(tuple(reversed(channel.kraus)))
        first = np.abs(pairing_amplitudes(theta_from_channel(channel), amplitudes))
        second = np.abs(pairing_amplitudes(theta_from_channel(reversed_channel), amplitudes))
        assert np.allclose(first, second, atol=1e-10)

    @pytest.mark.parametrize("eps", [1e-4, 1e-6, 1e-8])
    def test_nearly_parallel_leading_operators(self, rng, eps):
        """Test the determinant identity holds when the first two Kraus operators are nearly parallel."""
        amplitudes = random_pure_amplitudes(rng, 200)
        channel = near_parallel_channel(rng, eps)
        theta = theta_from_channel(channel)
        dets = output_det_pure(channel, amplitudes)
        assert np.allclose(dets, np.abs(pairing_amplitudes(theta, amplitudes)) ** 2, rtol=0, atol=1e-10)

    @pytest.mark.parametrize("eps", [1e-4, 1e-6, 1e-8])
    def test_nearly_parallel_basis_invariance(self, rng, eps):
        """Test moving the well-conditioned pair to the front leaves |<phi, θ phi>| unchanged."""
        amplitudes = random_pure_amplitudes(rng, 200)
        channel = near_parallel_channel(rng, eps)
        a, a_eps, b = channel.kraus
        reordered = KrausChannel((a, b, a_eps))
        first = np.abs(pairing_amplitudes(theta_from_channel(channel), amplitudes))
        second = np.abs(pairing_amplitudes(theta_from_channel(reordered), amplitudes))
        assert np.allclose(first, second, rtol=0, atol=1e-9)

    def test_span_tolerance_is_honoured(self):
        """Test a loose rank cutoff folds a tiny third direction into a two-dimensional span."""
        a, b = degenerate_channel(0.5).kraus
        tiny = 1e-9 * np.array([[0, 0], [1, 0]])
        channel = KrausChannel((a, b, tiny))
        with pytest.raises(SpanTooLarge):
            theta_from_channel(channel)
        theta = theta_from_channel(channel, span_tol=1e-6)
        assert np.allclose(np.abs(theta.matrix), np.abs(theta_from_pair(a, b).matrix), atol=1e-8)

    @pytest.mark.parametrize("s", [0.3, 0.5, 1.0])
    def test_depolarizing_raises(self, s):
        """Test depolarizing channels have no anti-linear θ."""
        with pytest.raises(SpanTooLarge) as exc:
            theta_from_channel(depolarizing(s))
        assert exc.value.span_dim == 4

    def test_theta_scale(self):
        """Test mu for identity coefficients is 1 and vanishes for a rank-one block."""
        assert theta_scale(np.eye(2)) == pytest.approx(1.0)
        assert theta_scale([[1, 0], [2, 0], [3, 0]]) == 0.0


@pytest.mark.unit
class TestTransformPair:
    """Test suite for θ(A', B') = conj(det mu) θ(A, B)."""

    def test_scaling_law(self, rng):
        """Test the determinant law for random pairs and random mu."""
        for _ in range(100):
            a, b = random_kraus_pair(rng)
            mu = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            a2, b2 = transform_pair(a, b, mu)
            expected = theta_from_pair(a, b).scaled(np.conj(np.linalg.det(mu))).matrix
            assert np.allclose(theta_from_pair(a2, b2).matrix, expected, atol=1e-12)

    def test_antisymmetric_in_swap(self, rng):
        """Test θ(B, A) = -θ(A, B)."""
        a, b = random_kraus_pair(rng)
        assert np.allclose(theta_from_pair(b, a).matrix, -theta_from_pair(a, b).matrix)


@pytest.mark.unit
class TestTakagi:
    """Test suite for Theta = U diag(d0, d1) U^T."""

    def test_diagonal_positive(self):
        """Test a positive diagonal matrix needs no rotation."""
        u, (d0, d1) = takagi(AntiHermOp(2.0, 0.0, 1.0))
        assert (d0, d1) == pytest.approx((2.0, 1.0))
        assert np.allclose(u, np.eye(2))

    def test_degenerate_channel_theta(self):
        """Test Theta = diag(0, -s) gives singular values (s, 0)."""
        s = 0.5
        theta = AntiHermOp(0.0, 0.0, -s)
        u, (d0, d1) = takagi(theta)
        assert (d0, d1) == pytest.approx((s, 0.0), abs=1e-14)
        assert np.allclose(u @ np.diag([d0, d1]) @ u.T, theta.matrix, atol=1e-14)

    def test_zero(self):
        """Test θ = 0 gives the identity and zero singular values."""
        u, (d0, d1) = takagi(AntiHermOp.zero())
        assert (d0, d1) == (0.0, 0.0)
        assert np.allclose(u, np.eye(2))

    def test_random_reconstruction(self, rng):
        """Test U is unitary and reconstructs Theta for random symmetric matrices."""
        for _ in range(100):
            theta = AntiHermOp.from_matrix(random_symmetric(rng))
            u, (d0, d1) = takagi(theta)
            assert d0 >= d1 >= 0
            assert np.allclose(u @ np.conj(u.T), np.eye(2), atol=1e-12)
            assert np.allclose(u @ np.diag([d0, d1]) @ u.T, theta.matrix, atol=1e-10)

    @pytest.mark.parametrize("mat", [
        [[0, 2], [2, 0]],
        [[2j, 0], [0, 2]],
        [[1, 0], [0, -1]],
    ])
    def test_tied_singular_values(self, mat):
        """Test reconstruction when both singular values coincide."""
        theta = AntiHermOp.from_matrix(mat)
        u, (d0, d1) = takagi(theta)
        assert d0 == pytest.approx(d1, abs=1e-12)
        assert np.allclose(u @ np.conj(u.T), np.eye(2), atol=1e-12)
        assert np.allclose(u @ np.diag([d0, d1]) @ u.T, theta.matrix, atol=1e-10)

    def test_deterministic(self, rng):
        """Test repeated calls return the same factor."""
        theta = AntiHermOp.from_matrix(random_symmetric(rng))
        first, _ = takagi(theta)
        second, _ = takagi(theta)
        assert np.array_equal(first, second)
