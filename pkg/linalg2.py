"""
Complex 2x2 linear algebra and the scalar entropy functions.
Density operators, pure states, Bloch geometry, entropies in bits.
"""
import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from exceptions import DomainError, InvariantViolation

logger = logging.getLogger(__name__)

STATE_TOL = 1e-12
BLOCH_TOL = 1e-9

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

ArrayLike = Union[float, np.ndarray]


def as_mat2(value, name: str = "matrix") -> np.ndarray:
    """Coerce to a read-only complex 2x2 array with finite entries."""
    mat = np.array(value, dtype=complex)
    if mat.shape != (2, 2):
        raise InvariantViolation("shape", f"{name} must be 2x2, got {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise InvariantViolation("finite", f"{name} has NaN or infinite entries")
    mat.setflags(write=False)
    return mat


def dagger(mat: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(mat, -1, -2))


def det2(mat: np.ndarray) -> np.ndarray:
    """Determinant of one or many 2x2 matrices."""
    return mat[..., 0, 0] * mat[..., 1, 1] - mat[..., 0, 1] * mat[..., 1, 0]


def hermitian_eigenvalues(mat: np.ndarray) -> Tuple[float, float]:
    """
    Closed-form eigenvalues (larger, smaller) of a 2x2 Hermitian matrix.
    """
    tr = float(np.real(mat[0, 0] + mat[1, 1]))
    det = float(np.real(det2(mat)))
    disc = max(tr * tr / 4.0 - det, 0.0)
    root = np.sqrt(disc)
    return tr / 2.0 + root, tr / 2.0 - root


def bloch_rotation(unitary: np.ndarray) -> np.ndarray:
    """
    Rotation R of the Bloch ball induced by rho -> U rho U^dagger.

    R[i, j] = 1/2 Re tr(sigma_i U sigma_j U^dagger)
    """
    u = np.asarray(unitary, dtype=complex)
    rot = np.empty((3, 3))
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            rot[i, j] = 0.5 * np.real(np.trace(si @ u @ sj @ dagger(u)))
    return rot


def _clamp_unit(x: ArrayLike, lo: float, hi: float, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < lo - STATE_TOL) or np.any(arr > hi + STATE_TOL) or np.any(np.isnan(arr)):
        raise DomainError(f"{name} outside [{lo}, {hi}]: {x}")
    return np.clip(arr, lo, hi)


def _scalar_or_array(result: np.ndarray):
    return float(result) if np.ndim(result) == 0 else result


def binary_entropy(x: ArrayLike) -> ArrayLike:
    """
    h(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 := 0.

    Accepts scalars or numpy arrays; arguments within 1e-12 of [0, 1] are clamped.
    """
    p = _clamp_unit(x, 0.0, 1.0, "binary_entropy argument")
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        terms = terms + np.where(q > 0, -q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return _scalar_or_array(terms)


def f_curve(y: ArrayLike) -> ArrayLike:
    """
    f(y) = h((1 + sqrt(1 - y^2)) / 2), even, convex on [-1, 1], increasing on [0, 1].
    """
    yy = _clamp_unit(y, -1.0, 1.0, "f_curve argument")
    lam = 0.5 * (1.0 + np.sqrt(np.maximum(1.0 - yy * yy, 0.0)))
    return binary_entropy(lam)


def check_density(mat: np.ndarray, tol: float = STATE_TOL) -> None:
    """Raise InvariantViolation unless mat is Hermitian, unit trace and positive within tol."""
    herm_dev = max(abs(mat[0, 1] - np.conj(mat[1, 0])),
                   abs(mat[0, 0].imag), abs(mat[1, 1].imag))
    if herm_dev > tol:
        raise InvariantViolation("hermitian", f"deviation {herm_dev:.3e}", herm_dev)

    trace_dev = abs(mat[0, 0].real + mat[1, 1].real - 1.0)
    if trace_dev > tol:
        raise InvariantViolation("trace", f"trace deviates from 1 by {trace_dev:.3e}", trace_dev)

    det = float(np.real(det2(mat)))
    if det < -tol or mat[0, 0].real < -tol or mat[1, 1].real < -tol:
        raise InvariantViolation("positive", f"det {det:.3e} or negative diagonal", det)


@dataclass(frozen=True)
class DensityOp:
    """Hermitian, positive, unit-trace 2x2 matrix; validated on construction."""

    mat: np.ndarray

    def __post_init__(self):
        mat = as_mat2(self.mat, "density operator")
        object.__setattr__(self, "mat", mat)
        check_density(mat)

    @classmethod
    def from_matrix(cls, mat, tol: float = STATE_TOL) -> "DensityOp":
        """
        Density operator from user input accepted within tol.

        The input is replaced by the nearest exact state: Hermitian part,
        eigenvalues clipped at zero, unit trace.
        """
        m = as_mat2(mat, "density operator")
        check_density(m, tol)
        herm = 0.5 * (m + dagger(m))
        eigvals, eigvecs = np.linalg.eigh(herm)
        eigvals = np.maximum(eigvals, 0.0)
        eigvals = eigvals / eigvals.sum()
        exact = (eigvecs * eigvals) @ dagger(eigvecs)
        return cls(0.5 * (exact + dagger(exact)))

    @classmethod
    def from_bloch(cls, bloch) -> "DensityOp":
        """Build (1 + x s1 + y s2 + z s3)/2; vectors with |r| <= 1 + 1e-9 are accepted and rescaled onto the sphere."""
        r = np.asarray(bloch, dtype=float)
        if r.shape != (3,) or not np.all(np.isfinite(r)):
            raise InvariantViolation("bloch", f"Bloch vector must be 3 finite reals, got {bloch}")
        norm = float(np.linalg.norm(r))
        if norm > 1.0 + BLOCH_TOL:
            raise InvariantViolation("positive", f"Bloch vector length {norm:.12f} > 1", norm)
        if norm > 1.0:
            r = r / norm
        mat = 0.5 * (IDENTITY + r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z)
        return cls(mat)

    @classmethod
    def maximally_mixed(cls) -> "DensityOp":
        return cls(0.5 * IDENTITY)

    @property
    def bloch(self) -> np.ndarray:
        m = self.mat
        return np.array([2.0 * m[0, 1].real, -2.0 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])

    @property
    def det(self) -> float:
        """Determinant clamped to [0, 1/4]."""
        return float(np.clip(np.real(det2(self.mat)), 0.0, 0.25))

    @property
    def eigenvalues(self) -> Tuple[float, float]:
        hi, lo = hermitian_eigenvalues(self.mat)
        return min(max(hi, 0.0), 1.0), min(max(lo, 0.0), 1.0)

    def is_pure(self, tol: float = STATE_TOL) -> bool:
        return self.det <= tol

    def mix(self, other: "DensityOp", weight: float) -> "DensityOp":
        """weight * self + (1 - weight) * other"""
        return DensityOp(weight * self.mat + (1.0 - weight) * other.mat)


@dataclass(frozen=True)
class PureState:
    """Unit-norm ket (x0, x1) with its projector view."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.shape != (2,) or not np.all(np.isfinite(amp)):
            raise InvariantViolation("shape", f"pure state needs two finite amplitudes, got {amp}")
        norm_dev = abs(float(np.vdot(amp, amp).real) - 1.0)
        if norm_dev > STATE_TOL:
            raise InvariantViolation("unit_norm", f"norm deviates by {norm_dev:.3e}", norm_dev)
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_amplitudes(cls, x0: complex, x1: complex, normalize: bool = False) -> "PureState":
        amp = np.array([x0, x1], dtype=complex)
        if normalize:
            norm = np.linalg.norm(amp)
            if norm == 0:
                raise InvariantViolation("unit_norm", "zero vector cannot be normalized")
            amp = amp / norm
        return cls(amp)

    @classmethod
    def from_bloch(cls, bloch) -> "PureState":
        """Ket whose projector has the given unit Bloch vector."""
        r = np.asarray(bloch, dtype=float)
        r = r / np.linalg.norm(r)
        x, y, z = r
        # divide by the larger hemisphere factor
        if z >= 0:
            x0 = np.sqrt((1.0 + z) / 2.0)
            x1 = (x + 1j * y) / np.sqrt(2.0 * (1.0 + z))
        else:
            x0 = (x - 1j * y) / np.sqrt(2.0 * (1.0 - z))
            x1 = np.sqrt((1.0 - z) / 2.0)
        return cls.from_amplitudes(x0, x1, normalize=True)

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, np.conj(self.amplitudes))

    @property
    def density(self) -> DensityOp:
        return DensityOp(self.projector)

    @property
    def bloch(self) -> np.ndarray:
        x0, x1 = self.amplitudes
        off = x0 * np.conj(x1)
        return np.array([2.0 * off.real, -2.0 * off.imag, abs(x0) ** 2 - abs(x1) ** 2])


def overlap(phi1: PureState, phi2: PureState) -> float:
    """|<phi1|phi2>|"""
    return float(abs(np.vdot(phi1.amplitudes, phi2.amplitudes)))


def von_neumann_entropy(omega: DensityOp) -> float:
    """S(omega) = h(mu_1) = f(2 sqrt(det omega)), in bits."""
    return float(f_curve(2.0 * np.sqrt(omega.det)))


def _spectral(omega: DensityOp):
    """Eigenvalues (hi, lo) and the Bloch axis of the hi eigenprojector (None when degenerate)."""
    hi, lo = omega.eigenvalues
    r = omega.bloch
    norm = float(np.linalg.norm(r))
    axis = r / norm if norm > STATE_TOL else None
    return hi, lo, axis


def relative_entropy(omega1: DensityOp, omega2: DensityOp) -> float:
    """
    S(omega1 || omega2) = tr omega1 (log2 omega1 - log2 omega2) in bits.

    Returns +inf when the support of omega1 is not contained in that of omega2.
    """
    hi2, lo2, axis2 = _spectral(omega2)
    r1 = omega1.bloch

    if axis2 is None:
        weights = ((0.5, hi2), (0.5, lo2))
    else:
        proj = float(np.dot(r1, axis2))
        weights = ((0.5 * (1.0 + proj), hi2), (0.5 * (1.0 - proj), lo2))

    cross = 0.0
    for weight, eig in weights:
        if weight <= STATE_TOL:
            continue
        if eig < STATE_TOL:
            logger.debug("relative_entropy: support mismatch (weight %.3e on eigenvalue %.3e)", weight, eig)
            return float("inf")
        cross -= weight * np.log2(eig)

    return max(float(cross - von_neumann_entropy(omega1)), 0.0)
