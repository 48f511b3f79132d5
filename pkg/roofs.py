"""
Closed-form roofs of a channel with an anti-linear θ.
Concurrence of state pairs, C_T, E_T, H_T and the flat leaf through a state.
"""
import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from antilinear import AntiHermOp, conjugate_action, takagi, theta_det_abs
from channels import KrausChannel, apply
from exceptions import InvariantViolation, PreconditionError
from linalg2 import (
    DensityOp, PureState, bloch_rotation, det2, f_curve, von_neumann_entropy,
)
from oracle import Ensemble, chord_ensemble

logger = logging.getLogger(__name__)

MIXTURE_TOL = 1e-10
FLATNESS_TOL = 1e-9
DEGENERATE_TOL = 1e-12


def concurrence_pair(omega1: DensityOp, omega2: Union[DensityOp, np.ndarray]) -> float:
    """
    C(omega1, omega2) = sqrt(max(0, tr omega1 omega2 - 2 sqrt(det omega1 det omega2))).

    omega2 may be an unnormalized positive matrix such as θ rho θ.
    """
    m2 = omega2.mat if isinstance(omega2, DensityOp) else np.asarray(omega2, dtype=complex)
    overlap = float(np.real(np.trace(omega1.mat @ m2)))
    dets = max(omega1.det, 0.0) * max(float(np.real(det2(m2))), 0.0)
    return float(np.sqrt(max(0.0, overlap - 2.0 * np.sqrt(dets))))


def channel_concurrence(theta: AntiHermOp, rho: DensityOp) -> float:
    """C_T(rho)^2 = tr(rho θ rho θ) - 2 det(rho) |det Theta|"""
    overlap = float(np.real(np.trace(rho.mat @ conjugate_action(theta, rho))))
    return float(np.sqrt(max(0.0, overlap - 2.0 * rho.det * theta_det_abs(theta))))


def channel_concurrence_extremal(theta: AntiHermOp, rho: DensityOp) -> float:
    """
    Two-term form for diagonal Theta = diag(alpha, delta):
    C_T^2 = (|alpha| rho00 - |delta| rho11)^2 + (2 Re(r rho10))^2, r = sqrt(alpha conj(delta)).
    """
    if not theta.is_diagonal:
        raise PreconditionError(f"extremal formula needs a diagonal θ, beta = {theta.beta}")
    m = rho.mat
    root = np.sqrt(theta.alpha * np.conj(theta.delta))
    first = abs(theta.alpha) * m[0, 0].real - abs(theta.delta) * m[1, 1].real
    second = 2.0 * np.real(root * m[1, 0])
    return float(np.sqrt(first ** 2 + second ** 2))


def entropy_roof(theta: AntiHermOp, rho: DensityOp) -> float:
    """E_T(rho) = f(2 C_T(rho)), in bits."""
    return float(f_curve(min(2.0 * channel_concurrence(theta, rho), 1.0)))


def _entropy_split(channel: KrausChannel, theta: AntiHermOp, rho: DensityOp) -> Tuple[float, float, float]:
    output = von_neumann_entropy(apply(channel, rho))
    roof = entropy_roof(theta, rho)
    return output, roof, output - roof


def entropy_wrt_channel(channel: KrausChannel, theta: AntiHermOp, rho: DensityOp) -> float:
    """H_T(rho) = S(T(rho)) - E_T(rho), clamped at zero."""
    _, _, raw = _entropy_split(channel, theta, rho)
    if raw < 0:
        logger.debug("entropy_wrt_channel: raw H_T %.3e clamped to 0", raw)
    return max(raw, 0.0)


@dataclass(frozen=True)
class RoofReport:
    concurrence: float
    entropy_roof: float
    output_entropy: float
    channel_entropy: float
    raw_channel_entropy: float


def roof_report(channel: KrausChannel, theta: AntiHermOp, rho: DensityOp) -> RoofReport:
    output, roof, raw = _entropy_split(channel, theta, rho)
    return RoofReport(
        concurrence=channel_concurrence(theta, rho),
        entropy_roof=roof,
        output_entropy=output,
        channel_entropy=max(raw, 0.0),
        raw_channel_entropy=raw,
    )


@dataclass(frozen=True)
class LeafDecomposition:
    """Two pure endpoints of the flat leaf through a state, with their weights."""

    endpoints: Tuple[PureState, PureState]
    weights: Tuple[float, float]
    direction: np.ndarray
    state: DensityOp

    def __post_init__(self):
        (first, second), (p1, p2) = self.endpoints, self.weights
        if min(p1, p2) < -MIXTURE_TOL or abs(p1 + p2 - 1.0) > MIXTURE_TOL:
            raise InvariantViolation("simplex", f"leaf weights ({p1}, {p2})")
        mixture = p1 * first.projector + p2 * second.projector
        gap = float(np.max(np.abs(mixture - self.state.mat)))
        if gap > MIXTURE_TOL:
            raise InvariantViolation("mixture", f"leaf endpoints reconstruct the state to {gap:.3e}", gap)

    def flatness_deviation(self, theta: AntiHermOp) -> float:
        """Largest |C_T(endpoint) - C_T(state)|."""
        centre = channel_concurrence(theta, self.state)
        return max(abs(channel_concurrence(theta, e.density) - centre) for e in self.endpoints)

    def check_flatness(self, theta: AntiHermOp, tol: float = FLATNESS_TOL) -> bool:
        return self.flatness_deviation(theta) <= tol

    def to_ensemble(self) -> Ensemble:
        if self.weights[1] == 0.0:
            return Ensemble((self.endpoints[0],), (1.0,), self.state)
        return Ensemble(self.endpoints, self.weights, self.state)

    @property
    def overlap(self) -> float:
        """|<phi1|phi2>| of the two endpoints."""
        first, second = self.endpoints
        return float(abs(np.vdot(first.amplitudes, second.amplitudes)))


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def leaf_direction(theta: AntiHermOp) -> np.ndarray:
    """
    Bloch direction of the chords on which C_T is constant.

    In the Takagi basis of θ the roof depends on the x and z Bloch components
    only, so the chords run along y. With a vanishing singular value it
    depends on z alone and any chord in the constant-z plane is flat; the
    x-axis of the Takagi basis is used.
    """
    unitary, (_, d1) = takagi(theta)
    rotation = bloch_rotation(unitary)
    if d1 > DEGENERATE_TOL:
        return _unit(rotation[:, 1])
    return _unit(rotation[:, 0])


def leaf(theta: AntiHermOp, rho: DensityOp) -> LeafDecomposition:
    """Optimal two-state decomposition of rho along its leaf; a pure rho returns itself."""
    direction = leaf_direction(theta)
    ensemble = chord_ensemble(rho, direction)
    if len(ensemble) == 1:
        state = ensemble.states[0]
        return LeafDecomposition((state, state), (1.0, 0.0), direction, rho)
    return LeafDecomposition(
        (ensemble.states[0], ensemble.states[1]),
        (ensemble.weights[0], ensemble.weights[1]),
        direction,
        rho,
    )

