"""
Kraus-form 1-qubit channels.
Validation, application, span analysis and builders for the named channel families.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from exceptions import DomainError, InvariantViolation, NormalizationError
from linalg2 import (
    IDENTITY, PAULIS, DensityOp, as_mat2, dagger, det2,
)

logger = logging.getLogger(__name__)

CPTP_TOL = 1e-10
SPAN_RANK_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """Ordered Kraus operators A_j realizing T(rho) = sum_j A_j rho A_j^dagger."""

    kraus: Tuple[np.ndarray, ...]
    name: str = ""

    def __post_init__(self):
        ops = tuple(as_mat2(k, f"Kraus operator {i}") for i, k in enumerate(self.kraus))
        if not ops:
            raise InvariantViolation("kraus_count", "a channel needs at least one Kraus operator")
        object.__setattr__(self, "kraus", ops)

    @property
    def stack(self) -> np.ndarray:
        """Kraus operators as an (m, 2, 2) array."""
        return np.stack(self.kraus)

    def __len__(self) -> int:
        return len(self.kraus)


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    deviation: float
    tol: float = CPTP_TOL


@dataclass(frozen=True)
class SpanBasis:
    """
    Basis {A, B} of the Kraus span with coefficients A_j = mu1_j A + mu2_j B.

    span_dim is the numerical rank; when it exceeds two the basis fields are
    zero and coeffs is empty.
    """

    basis_a: np.ndarray
    basis_b: np.ndarray
    coeffs: np.ndarray
    span_dim: int
    singular_values: Tuple[float, ...] = field(default=())
    residual: float = 0.0

    @property
    def representable(self) -> bool:
        return self.span_dim <= 2

    @property
    def smallest_singular_value(self) -> float:
        nonzero = [s for s in self.singular_values if s > 0]
        return min(nonzero) if nonzero else 0.0


def validate_cptp(channel: KrausChannel, tol: float = CPTP_TOL) -> ValidationReport:
    """Max entrywise deviation of sum A_j^dagger A_j from the identity."""
    stack = channel.stack
    total = np.einsum("kji,kjl->il", np.conj(stack), stack)
    deviation = float(np.max(np.abs(total - IDENTITY)))
    report = ValidationReport(passed=deviation <= tol, deviation=deviation, tol=tol)
    if not report.passed:
        logger.debug("validate_cptp failed for %s: deviation %.3e", channel.name or "channel", deviation)
    return report


def apply_many(channel: KrausChannel, mats: np.ndarray) -> np.ndarray:
    """T applied to an (..., 2, 2) stack of matrices, no validation."""
    stack = channel.stack
    return np.einsum("kij,...jl,kml->...im", stack, mats, np.conj(stack))


def apply(channel: KrausChannel, rho: DensityOp) -> DensityOp:
    """T(rho) = sum_j A_j rho A_j^dagger, checked as a DensityOp."""
    out = apply_many(channel, rho.mat)
    return DensityOp(0.5 * (out + dagger(out)))


def output_det_pure(channel: KrausChannel, amplitudes: np.ndarray) -> np.ndarray:
    """det T(|x><x|) for an (N, 2) array of kets."""
    images = np.einsum("kij,nj->nki", channel.stack, amplitudes)
    outputs = np.einsum("nki,nkl->nil", images, np.conj(images))
    return np.maximum(np.real(det2(outputs)), 0.0)


def extremal_channel(a00: complex, a11: complex, b01: complex, b10: complex,
                     tol: float = CPTP_TOL) -> KrausChannel:
    """
    Two-Kraus channel A = diag(a00, a11), B = [[0, b01], [b10, 0]].

    Requires |a00|^2 + |b10|^2 = |a11|^2 + |b01|^2 = 1.
    """
    first = abs(a00) ** 2 + abs(b10) ** 2
    second = abs(a11) ** 2 + abs(b01) ** 2
    if abs(first - 1.0) > tol or abs(second - 1.0) > tol:
        raise NormalizationError(
            "normalization",
            f"|a00|^2+|b10|^2 = {first:.12f}, |a11|^2+|b01|^2 = {second:.12f}",
            max(abs(first - 1.0), abs(second - 1.0)),
        )
    a = np.array([[a00, 0], [0, a11]], dtype=complex)
    b = np.array([[0, b01], [b10, 0]], dtype=complex)
    return KrausChannel((a, b), name="extremal")


def degenerate_channel(t: float) -> KrausChannel:
    """A = diag(1, sqrt t), B = [[0, sqrt(1-t)], [0, 0]]; t = 0 is the constant channel."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"degenerate channel parameter t={t} outside [0, 1]")
    channel = extremal_channel(1.0, np.sqrt(t), np.sqrt(1.0 - t), 0.0)
    return KrausChannel(channel.kraus, name=f"degenerate-{t:g}")


def amplitude_damping(t: float) -> KrausChannel:
    """The degenerate family read as amplitude damping: |1> survives with probability t."""
    return degenerate_channel(t)


def identity_channel() -> KrausChannel:
    return KrausChannel((IDENTITY,), name="identity")


def unitary_channel(unitary) -> KrausChannel:
    return KrausChannel((np.asarray(unitary, dtype=complex),), name="unitary")


def with_global_phase(channel: KrausChannel, phase: float) -> KrausChannel:
    """Same map, every Kraus operator multiplied by exp(i phase)."""
    factor = np.exp(1j * phase)
    return KrausChannel(tuple(factor * k for k in channel.kraus), name=channel.name)


def depolarizing(s: float, dim: int = 2) -> KrausChannel:
    """
    T_s(rho) = [(tr rho) 1 + s rho] / (s + 2), completely positive for s >= -1/2.

    Kraus form: sqrt((1/2 + s)/(s + 2)) 1 and (2(s + 2))^(-1/2) sigma_k.
    """
    if dim != 2:
        raise DomainError("only the qubit depolarizing channel is supported")
    if not np.isfinite(s) or s < -1.0 / dim:
        raise DomainError(f"depolarizing parameter s={s} outside the CP range s >= -1/2")

    ops: List[np.ndarray] = []
    identity_weight = (0.5 + s) / (s + 2.0)
    if identity_weight > 0:
        ops.append(np.sqrt(identity_weight) * IDENTITY)
    pauli_weight = 1.0 / np.sqrt(2.0 * (s + 2.0))
    ops.extend(pauli_weight * p for p in PAULIS)
    return KrausChannel(tuple(ops), name=f"depolarizing-{s:g}")


def _best_pair(vectors: np.ndarray) -> Tuple[int, int]:
    """Index pair (i < j) whose vectorized operators span the largest area; first pair on ties."""
    gram = vectors.conj() @ vectors.T
    norms = np.real(np.diag(gram))
    area = np.outer(norms, norms) - np.abs(gram) ** 2
    area = np.triu(area, k=1)
    i, j = np.unravel_index(int(np.argmax(area)), area.shape)
    return int(i), int(j)


def kraus_span(channel: KrausChannel, tol: float = SPAN_RANK_TOL) -> SpanBasis:
    """
    Numerical rank of the span of the vectorized Kraus operators.

    For rank two the basis {A, B} is the pair of Kraus operators with the
    largest Gram determinant, kept in channel order; for rank one A is the
    operator of largest norm. The coefficients come from a least-squares
    reconstruction against that basis.
    """
    stack = channel.stack
    vectors = stack.reshape(len(stack), 4)
    singular = np.linalg.svd(vectors, compute_uv=False)
    scale = float(singular[0]) if singular.size else 0.0
    rank = int(np.sum(singular > tol * scale)) if scale > 0 else 0

    smallest = float(singular[rank - 1]) / scale if rank > 0 else 0.0
    if rank > 0 and smallest < 100.0 * tol:
        logger.warning("kraus_span: smallest relative singular value %.3e is near the rank threshold", smallest)

    zero = np.zeros((2, 2), dtype=complex)
    if rank > 2:
        return SpanBasis(zero, zero, np.zeros((0, 2), dtype=complex), rank, tuple(singular))
    if rank == 0:
        return SpanBasis(zero, zero, np.zeros((len(stack), 2), dtype=complex), 0, tuple(singular))

    if rank == 1:
        basis_a = stack[int(np.argmax(np.linalg.norm(vectors, axis=1)))]
        a_vec = basis_a.reshape(4)
        # B = 0: only the first coefficient is determined.
        mu1 = vectors @ np.conj(a_vec) / np.vdot(a_vec, a_vec)
        coeffs = np.stack([mu1, np.zeros_like(mu1)], axis=1)
        basis_b = zero
    else:
        first, second = _best_pair(vectors)
        basis_a, basis_b = stack[first], stack[second]
        design = np.stack([basis_a.reshape(4), basis_b.reshape(4)], axis=1)
        coeffs, *_ = np.linalg.lstsq(design, vectors.T, rcond=None)
        coeffs = coeffs.T

    design = np.stack([basis_a.reshape(4), basis_b.reshape(4)], axis=1)
    residual = float(np.max(np.abs(vectors - coeffs @ design.T)))
    return SpanBasis(
        basis_a=basis_a,
        basis_b=basis_b,
        coeffs=coeffs,
        span_dim=rank,
        singular_values=tuple(singular),
        residual=residual,
    )
