"""
Unit tests for the closed-form roofs.
Tests pair concurrence, C_T, E_T, H_T and the flat leaf decomposition.
"""

import pytest
import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import scipy.linalg

from antilinear import AntiHermOp, takagi, theta_from_channel
from channels import apply, degenerate_channel, extremal_channel
from exceptions import InvariantViolation, PreconditionError
from linalg2 import DensityOp, PureState, binary_entropy, bloch_rotation, f_curve, von_neumann_entropy
from roofs import (
    LeafDecomposition, channel_concurrence, channel_concurrence_extremal, concurrence_pair,
    entropy_roof, entropy_wrt_channel, leaf, leaf_direction, roof_report,
)
from seed_data import (
    random_density, random_interior_density, random_pair_channel, random_pure_state,
    random_span_channel, random_symmetric,
)


def _random_theta(rng):
    return AntiHermOp.from_matrix(random_symmetric(rng))


@pytest.mark.unit
class TestConcurrencePair:
    """Test suite for C(omega1, omega2)."""

    def test_pure_with_itself(self, rng):
        """Test C(pi, pi) = 1."""
        pi = random_pure_state(rng).density
        assert concurrence_pair(pi, pi) == pytest.approx(1.0, abs=1e-7)

    def test_maximally_mixed_is_zero(self):
        """Test C(1/2, 1/2) = 0."""
        mixed = DensityOp.maximally_mixed()
        assert concurrence_pair(mixed, mixed) == 0.0

    def test_matches_fidelity_eigenvalues(self, rng):
        """Test the closed form against lambda1 - lambda2 of sqrt(sqrt(w1) w2 sqrt(w1))."""
        for _ in range(30):
            w1 = random_interior_density(rng)
            w2 = random_interior_density(rng)
            root = scipy.linalg.sqrtm(w1.mat)
            lam = np.sort(np.real(np.linalg.eigvals(scipy.linalg.sqrtm(root @ w2.mat @ root))))[::-1]
            assert concurrence_pair(w1, w2) == pytest.approx(lam[0] - lam[1], abs=1e-8)


@pytest.mark.unit
class TestChannelConcurrence:
    """Test suite for C_T."""

    @pytest.mark.parametrize("t", np.linspace(0.1, 0.9, 9))
    def test_degenerate_formula(self, rng, t):
        """Test C_T(rho) = sqrt(t(1-t)) rho11 for the degenerate channel."""
        theta = theta_from_channel(degenerate_channel(t))
        for _ in range(1000):
            rho = random_density(rng)
            expected = np.sqrt(t * (1 - t)) * rho.mat[1, 1].real
            assert abs(channel_concurrence(theta, rho) - expected) < 1e-12

    def test_pure_state_is_output_root_det(self, rng):
        """Test C_T(pi) = sqrt(det T(pi)) on pure inputs."""
        for _ in range(20):
            channel = random_pair_channel(rng)
            theta = theta_from_channel(channel)
            pi = random_pure_state(rng).density
            assert channel_concurrence(theta, pi) == pytest.approx(np.sqrt(apply(channel, pi).det), abs=1e-10)

    def test_extremal_agrees(self, rng):
        """Test the two-term form agrees with the general one for diagonal θ."""
        for _ in range(100):
            alpha = complex(rng.normal(), rng.normal())
            delta = complex(rng.normal(), rng.normal())
            theta = AntiHermOp(alpha, 0.0, delta)
            rho = random_density(rng)
            assert channel_concurrence_extremal(theta, rho) == pytest.approx(
                channel_concurrence(theta, rho), abs=1e-10)

    def test_extremal_channel_family(self, rng):
        """Test the two-term form on θ built from extremal channels."""
        for _ in range(20):
            u, v = rng.uniform(0, np.pi / 2, size=2)
            theta = theta_from_channel(extremal_channel(np.cos(u), np.cos(v), np.sin(v), np.sin(u)))
            rho = random_density(rng)
            assert channel_concurrence_extremal(theta, rho) == pytest.approx(
                channel_concurrence(theta, rho), abs=1e-10)

    def test_extremal_requires_diagonal(self):
        """Test a nonzero off-diagonal entry is rejected."""
        with pytest.raises(PreconditionError):
            channel_concurrence_extremal(AntiHermOp(1.0, 0.3, 1.0), DensityOp.maximally_mixed())

    def test_range_and_upper_bound(self, rng):
        """Test 0 <= C_T <= 1/2 and C_T(rho) <= sqrt(det T(rho))."""
        for _ in range(20):
            channel = random_span_channel(rng)
            theta = theta_from_channel(channel)
            for _ in range(50):
                rho = random_density(rng)
                value = channel_concurrence(theta, rho)
                assert 0.0 <= value <= 0.5 + 1e-12
                assert value <= np.sqrt(apply(channel, rho).det) + 1e-10

    def test_convexity(self, rng):
        """Test C_T and E_T are convex along random segments."""
        for _ in range(50):
            theta = theta_from_channel(random_pair_channel(rng))
            a, b = random_density(rng), random_density(rng)
            lam = rng.uniform()
            mid = a.mix(b, lam)
            for roof in (channel_concurrence, entropy_roof):
                assert roof(theta, mid) <= lam * roof(theta, a) + (1 - lam) * roof(theta, b) + 1e-12

    def test_zero_theta(self):
        """Test θ = 0 gives C_T = 0 everywhere."""
        assert channel_concurrence(AntiHermOp.zero(), DensityOp.from_bloch([0.1, 0.2, 0.3])) == 0.0


@pytest.mark.unit
class TestEntropyRoof:
    """Test suite for E_T and H_T."""

    def test_degenerate_maximally_mixed(self, degenerate_half):
        """Test E_T(1/2) = f(1/2) = 0.35459 at t = 1/2."""
        theta = theta_from_channel(degenerate_half)
        value = entropy_roof(theta, DensityOp.maximally_mixed())
        assert value == pytest.approx(f_curve(0.5), abs=1e-12)
        assert value == pytest.approx(0.35459, abs=1e-4)

    def test_pure_state(self, rng):
        """Test E_T(pi) = S(T(pi))."""
        for _ in range(20):
            channel = random_pair_channel(rng)
            pi = random_pure_state(rng).density
            assert entropy_roof(theta_from_channel(channel), pi) == pytest.approx(
                von_neumann_entropy(apply(channel, pi)), abs=1e-7)

    def test_channel_entropy_pure_is_zero(self, rng):
        """Test H_T vanishes on pure states."""
        channel = random_pair_channel(rng)
        theta = theta_from_channel(channel)
        pi = random_pure_state(rng).density
        assert entropy_wrt_channel(channel, theta, pi) == pytest.approx(0.0, abs=1e-7)

    def test_identity_channel_entropy(self, identity, rng):
        """Test H_T = S(rho) for the identity channel."""
        theta = theta_from_channel(identity)
        rho = random_density(rng)
        assert entropy_wrt_channel(identity, theta, rho) == pytest.approx(von_neumann_entropy(rho))

    def test_degenerate_diagonal_closed_form(self):
        """Test H_T(diag(1 - r, r)) = h(r t) - f(2 sqrt(t(1-t)) r)."""
        for t in (0.25, 0.5, 0.75):
            channel = degenerate_channel(t)
            theta = theta_from_channel(channel)
            for r in np.linspace(0.0, 1.0, 11):
                rho = DensityOp(np.diag([1.0 - r, r]))
                expected = binary_entropy(r * t) - f_curve(2 * np.sqrt(t * (1 - t)) * r)
                assert entropy_wrt_channel(channel, theta, rho) == pytest.approx(max(expected, 0.0), abs=1e-10)

    def test_report_fields(self, degenerate_half):
        """Test the roof report is consistent with the individual roofs."""
        theta = theta_from_channel(degenerate_half)
        rho = DensityOp.from_bloch([0.2, 0.1, -0.3])
        report = roof_report(degenerate_half, theta, rho)
        assert report.concurrence == pytest.approx(channel_concurrence(theta, rho))
        assert report.entropy_roof == pytest.approx(entropy_roof(theta, rho))
        assert report.output_entropy - report.entropy_roof == pytest.approx(report.raw_channel_entropy)
        assert report.channel_entropy == max(report.raw_channel_entropy, 0.0)


@pytest.mark.unit
class TestLeaf:
    """Test suite for the flat leaf through a state."""

    def test_flatness_on_random_channels(self, rng):
        """Test leaf endpoints reproduce rho and share its concurrence."""
        for _ in range(50):
            theta = theta_from_channel(random_pair_channel(rng))
            for _ in range(20):
                rho = random_interior_density(rng)
                decomposition = leaf(theta, rho)
                assert decomposition.flatness_deviation(theta) <= 1e-9
                assert sum(decomposition.weights) == pytest.approx(1.0)

    def test_roof_constant_along_chord(self, rng):
        """Test C_T is constant at interior points of the leaf chord."""
        for _ in range(10):
            theta = theta_from_channel(random_pair_channel(rng))
            rho = random_interior_density(rng)
            decomposition = leaf(theta, rho)
            first, second = (e.bloch for e in decomposition.endpoints)
            centre = channel_concurrence(theta, rho)
            for lam in np.linspace(0.0, 1.0, 20):
                point = DensityOp.from_bloch(lam * first + (1 - lam) * second)
                assert channel_concurrence(theta, point) == pytest.approx(centre, abs=1e-9)

    def test_entropy_roof_is_linear_on_leaf(self, rng):
        """Test E_T(rho) = sum p_j E_T(pi_j) on the leaf."""
        for _ in range(20):
            theta = theta_from_channel(random_span_channel(rng))
            rho = random_interior_density(rng)
            decomposition = leaf(theta, rho)
            total = sum(p * entropy_roof(theta, e.density)
                        for p, e in zip(decomposition.weights, decomposition.endpoints))
            assert total == pytest.approx(entropy_roof(theta, rho), abs=1e-9)

    def test_degenerate_endpoints(self, degenerate_half):
        """Test leaves of the degenerate channel stay at constant z."""
        theta = theta_from_channel(degenerate_half)
        rho = DensityOp.from_bloch([0.1, 0.2, 0.3])
        decomposition = leaf(theta, rho)
        assert abs(decomposition.direction[2]) < 1e-12
        for endpoint in decomposition.endpoints:
            assert endpoint.bloch[2] == pytest.approx(0.3, abs=1e-12)
            assert np.linalg.norm(endpoint.bloch) == pytest.approx(1.0)

    def test_leaf_direction_unit(self, rng):
        """Test the leaf direction is a unit vector for random θ."""
        for _ in range(20):
            assert np.linalg.norm(leaf_direction(_random_theta(rng))) == pytest.approx(1.0)

    def test_degenerate_leaf_along_takagi_x(self, degenerate_half):
        """Test a rank-one θ takes its leaf along the Takagi x-axis, orthogonal to z."""
        theta = theta_from_channel(degenerate_half)
        rotation = bloch_rotation(takagi(theta)[0])
        direction = leaf_direction(theta)
        assert abs(np.dot(direction, rotation[:, 0])) == pytest.approx(1.0)
        assert np.dot(direction, rotation[:, 2]) == pytest.approx(0.0, abs=1e-12)

    def test_pure_state_leaf(self, rng):
        """Test a pure state is its own leaf with weights (1, 0)."""
        theta = theta_from_channel(random_pair_channel(rng))
        pi = random_pure_state(rng).density
        decomposition = leaf(theta, pi)
        assert decomposition.weights == (1.0, 0.0)
        assert len(decomposition.to_ensemble()) == 1

    def test_maximally_mixed_leaf_is_orthogonal(self, degenerate_half):
        """Test the leaf through the centre has antipodal endpoints."""
        theta = theta_from_channel(degenerate_half)
        decomposition = leaf(theta, DensityOp.maximally_mixed())
        assert decomposition.overlap == pytest.approx(0.0, abs=1e-12)
        assert decomposition.weights == pytest.approx((0.5, 0.5))

    def test_rejects_bad_mixture(self):
        """Test endpoints that do not average to the state are rejected."""
        up = PureState.from_bloch([0, 0, 1])
        down = PureState.from_bloch([0, 0, -1])
        with pytest.raises(InvariantViolation):
            LeafDecomposition((up, down), (0.3, 0.7), np.array([0, 0, 1.0]), DensityOp.maximally_mixed())
