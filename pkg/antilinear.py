"""
Hermitian anti-linear operators on a qubit.
An operator θ is stored as the symmetric matrix Θ of its action x -> Θ conj(x).
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np
import scipy.linalg

from channels import SPAN_RANK_TOL, KrausChannel, kraus_span
from exceptions import InvariantViolation, SpanTooLarge
from linalg2 import DensityOp, PureState, as_mat2

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
TAKAGI_TIE_TOL = 1e-10


@dataclass(frozen=True)
class AntiHermOp:
    """
    Hermitian anti-linear operator with matrix [[alpha, beta], [beta, delta]].

    Only one off-diagonal value is stored, so symmetry holds by construction.
    """

    alpha: complex = 0j
    beta: complex = 0j
    delta: complex = 0j

    def __post_init__(self):
        values = [complex(v) for v in (self.alpha, self.beta, self.delta)]
        if not all(np.isfinite(v.real) and np.isfinite(v.imag) for v in values):
            raise InvariantViolation("finite", f"anti-linear entries must be finite: {values}")
        for name, value in zip(("alpha", "beta", "delta"), values):
            object.__setattr__(self, name, value)

    @classmethod
    def from_matrix(cls, mat, tol: float = SYMMETRY_TOL) -> "AntiHermOp":
        m = as_mat2(mat, "anti-linear matrix")
        asym = abs(m[0, 1] - m[1, 0])
        if asym > tol:
            raise InvariantViolation("symmetry", f"Theta[0][1] - Theta[1][0] = {asym:.3e}", asym)
        return cls(m[0, 0], 0.5 * (m[0, 1] + m[1, 0]), m[1, 1])

    @classmethod
    def zero(cls) -> "AntiHermOp":
        return cls()

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [self.beta, self.delta]], dtype=complex)

    @property
    def is_diagonal(self) -> bool:
        return abs(self.beta) <= SYMMETRY_TOL

    def apply(self, x) -> np.ndarray:
        """x -> Theta conj(x)"""
        return self.matrix @ np.conj(np.asarray(x, dtype=complex))

    def scaled(self, c: complex) -> "AntiHermOp":
        return AntiHermOp(c * self.alpha, c * self.beta, c * self.delta)

    def adjoint(self) -> "AntiHermOp":
        # Hermitian: the adjoint of x -> Theta conj(x) has matrix Theta^T = Theta.
        return self


def theta_from_pair(a, b) -> AntiHermOp:
    """
    The unique Hermitian θ with det(A pi A^dagger + B pi B^dagger) = |<phi, θ phi>|^2.

    Trace preservation of the pair is not required.
    """
    a = as_mat2(a, "A")
    b = as_mat2(b, "B")
    c00 = a[0, 0] * b[1, 0] - a[1, 0] * b[0, 0]
    c11 = a[0, 1] * b[1, 1] - a[1, 1] * b[0, 1]
    c_mixed = a[0, 0] * b[1, 1] + a[0, 1] * b[1, 0] - a[1, 0] * b[0, 1] - a[1, 1] * b[0, 0]
    return AntiHermOp(np.conj(c00), 0.5 * np.conj(c_mixed), np.conj(c11))


def pairing_amplitudes(theta: AntiHermOp, amplitudes: np.ndarray) -> np.ndarray:
    """<x, θ x> for an (N, 2) array of kets."""
    x = np.conj(np.asarray(amplitudes, dtype=complex))
    return theta.alpha * x[..., 0] ** 2 + 2.0 * theta.beta * x[..., 0] * x[..., 1] + theta.delta * x[..., 1] ** 2


def pairing(theta: AntiHermOp, phi: PureState) -> complex:
    """<phi, θ phi> = alpha conj(x0)^2 + 2 beta conj(x0) conj(x1) + delta conj(x1)^2"""
    return complex(pairing_amplitudes(theta, phi.amplitudes))


def conjugate_action(theta: AntiHermOp, rho: DensityOp) -> np.ndarray:
    """The linear operator θ rho θ^dagger, with θ^dagger = θ for Hermitian θ."""
    out = theta.matrix @ np.conj(rho.mat) @ np.conj(theta.adjoint().matrix)
    return 0.5 * (out + np.conj(out.T))


def theta_det_abs(theta: AntiHermOp) -> float:
    """sqrt(det θ^2) on the nonnegative branch: |alpha delta - beta^2|."""
    return float(abs(theta.alpha * theta.delta - theta.beta ** 2))


def square(theta: AntiHermOp) -> np.ndarray:
    """θ^2 as a linear matrix, Theta conj(Theta)."""
    m = theta.matrix
    return m @ np.conj(m)


def theta_scale(coeffs: np.ndarray) -> float:
    """
    sqrt(sum_{j<k} |mu1_j mu2_k - mu2_j mu1_k|^2) for span coefficients of shape (m, 2).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    total = 0.0
    for j, k in combinations(range(len(coeffs)), 2):
        minor = coeffs[j, 0] * coeffs[k, 1] - coeffs[j, 1] * coeffs[k, 0]
        total += abs(minor) ** 2
    return float(np.sqrt(total))


def theta_from_channel(channel: KrausChannel, span_tol: float = SPAN_RANK_TOL) -> AntiHermOp:
    """
    θ' = mu θ(A, B) for a channel whose Kraus span has dimension <= 2.

    span_tol is the relative singular-value cutoff for the span rank.
    Raises SpanTooLarge for larger spans.
    """
    span = kraus_span(channel, span_tol)
    if not span.representable:
        logger.info("theta_from_channel: %s has span dimension %d", channel.name or "channel", span.span_dim)
        raise SpanTooLarge(span.span_dim, span.singular_values)
    logger.debug("theta_from_channel: span dim %d, smallest singular value %.3e",
                 span.span_dim, span.smallest_singular_value)
    if span.span_dim < 2:
        return AntiHermOp.zero()

    mu = theta_scale(span.coeffs)
    return theta_from_pair(span.basis_a, span.basis_b).scaled(mu)


def transform_pair(a, b, mu) -> Tuple[np.ndarray, np.ndarray]:
    """A' = mu11 A + mu12 B, B' = mu21 A + mu22 B."""
    a = as_mat2(a, "A")
    b = as_mat2(b, "B")
    mu = np.asarray(mu, dtype=complex)
    return mu[0, 0] * a + mu[0, 1] * b, mu[1, 0] * a + mu[1, 1] * b


def _closest_to_identity(unitary: np.ndarray) -> np.ndarray:
    """Right-multiply by the real orthogonal O minimizing ||U O - 1||_F."""
    p, _, rt = np.linalg.svd(np.real(unitary))
    return unitary @ (rt.T @ p.T)


def takagi(theta: AntiHermOp, tol: float = TAKAGI_TIE_TOL) -> Tuple[np.ndarray, Tuple[float, float]]:
    """
    Unitary U and d0 >= d1 >= 0 with Theta = U diag(d0, d1) U^T.

    Singular values within tol are treated as one block, whose square root
    is taken with scipy.linalg.sqrtm; the remaining freedom is fixed
    deterministically (positive diagonal phases, or U nearest the identity
    on a tie).
    """
    m = theta.matrix
    v, singular, w_adjoint = np.linalg.svd(m)
    w = np.conj(w_adjoint.T)
    d0, d1 = float(singular[0]), float(singular[1])

    if d0 <= tol:
        return np.eye(2, dtype=complex), (d0, d1)

    if d0 - d1 <= tol * max(d0, 1.0):
        q = scipy.linalg.sqrtm(v.T @ w)
        unitary = _closest_to_identity(v @ np.conj(q))
        return unitary, (d0, d1)

    phases = np.empty(2, dtype=complex)
    for j in range(2):
        z = v[:, j] @ w[:, j]
        phases[j] = np.sqrt(z / abs(z)) if abs(z) > tol else 1.0
    unitary = v @ np.diag(np.conj(phases))
    for j in range(2):
        # column sign is free; keep the diagonal entry in the right half-plane
        if unitary[j, j].real < 0 or (unitary[j, j].real == 0 and unitary[j, j].imag < 0):
            unitary[:, j] = -unitary[:, j]
    return unitary, (d0, d1)
