"""
Holevo one-shot capacity of a qubit channel with an anti-linear θ.
Maximizes H_T over the Bloch ball; the degenerate family also has a 1-D reduction.
"""
import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np
import scipy.optimize as so
from scipy.stats import qmc

from antilinear import AntiHermOp, theta_det_abs, theta_from_channel
from channels import KrausChannel, apply_many
from exceptions import DomainError
from linalg2 import IDENTITY, PAULIS, DensityOp, binary_entropy, det2, f_curve
from oracle import Ensemble, OracleConfig, mutual_information
from roofs import LeafDecomposition, leaf

logger = logging.getLogger(__name__)

CAPACITY_STARTS = 32
DEGENERATE_GRID_POINTS = 4096
ORTHOGONAL_TOL = 1e-6
CONSISTENCY_TOL = 1e-5
TRIVIAL_CAPACITY = 1e-9


class CapacityResult(NamedTuple):
    value: float
    argmax: DensityOp
    ensemble: Ensemble
    leaf: LeafDecomposition


@dataclass(frozen=True)
class OptimalSignalReport:
    overlap: float
    orthogonal: bool
    mutual_information: float
    capacity: float
    consistent: bool
    degenerate_optimum: bool


def _project_to_ball(x: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(x))
    return x / norm if norm > 1.0 else x


def _channel_entropy_objective(channel: KrausChannel, theta: AntiHermOp) -> Callable[[np.ndarray], float]:
    """H_T as a function of the Bloch vector, without DensityOp validation."""
    images = apply_many(channel, np.stack([IDENTITY, *PAULIS]))
    paulis = np.stack(PAULIS)
    m = theta.matrix
    m_conj = np.conj(m)
    det_theta = theta_det_abs(theta)

    def h_t(bloch: np.ndarray) -> float:
        rho = 0.5 * (IDENTITY + np.tensordot(bloch, paulis, axes=1))
        output = 0.5 * (images[0] + np.tensordot(bloch, images[1:], axes=1))
        out_det = min(max(float(np.real(det2(output))), 0.0), 0.25)
        rho_det = min(max(float(np.real(det2(rho))), 0.0), 0.25)
        overlap = float(np.real(np.trace(rho @ m @ np.conj(rho) @ m_conj)))
        conc = np.sqrt(max(0.0, overlap - 2.0 * rho_det * det_theta))
        return float(f_curve(min(2.0 * np.sqrt(out_det), 1.0)) - f_curve(min(2.0 * conc, 1.0)))

    return h_t


def _sobol_starts(count: int, seed: int) -> np.ndarray:
    """Low-discrepancy points spread uniformly over the unit ball."""
    sampler = qmc.Sobol(d=3, scramble=True, seed=np.random.default_rng(np.random.SeedSequence(seed)))
    u = sampler.random_base2(m=int(np.ceil(np.log2(max(count, 1)))))[:count]
    radius = np.cbrt(u[:, 0])
    cos_polar = 2.0 * u[:, 1] - 1.0
    sin_polar = np.sqrt(np.maximum(1.0 - cos_polar ** 2, 0.0))
    azimuth = 2.0 * np.pi * u[:, 2]
    return radius[:, None] * np.stack(
        [sin_polar * np.cos(azimuth), sin_polar * np.sin(azimuth), cos_polar], axis=1
    )


def capacity(channel: KrausChannel, theta: Optional[AntiHermOp] = None,
             opt: Optional[OracleConfig] = None, starts: int = CAPACITY_STARTS) -> CapacityResult:
    """
    max over the Bloch ball of H_T, by multistart Nelder-Mead.

    Points outside the ball are projected onto the sphere before evaluation.
    Ties between starts go to the lowest start index.
    """
    opt = opt or OracleConfig()
    if theta is None:
        theta = theta_from_channel(channel)
    h_t = _channel_entropy_objective(channel, theta)

    def negative(x):
        return -h_t(_project_to_ball(x))

    best_value, best_point = -np.inf, None
    for k, x0 in enumerate(_sobol_starts(starts, opt.seed)):
        res = so.minimize(
            negative, x0=x0, method="Nelder-Mead",
            options=dict(xatol=1e-10, fatol=1e-14, maxiter=max(opt.refine_iters, 1) * 20),
        )
        value = -float(res.fun)
        if value > best_value:
            best_value, best_point = value, _project_to_ball(np.asarray(res.x))
        logger.debug("capacity start %d: %.15f after %d evaluations", k, value, res.nfev)

    argmax = DensityOp.from_bloch(best_point)
    decomposition = leaf(theta, argmax)
    logger.info("capacity %s: %.12f at Bloch %s", channel.name or "channel", best_value, np.round(best_point, 9))
    return CapacityResult(max(best_value, 0.0), argmax, decomposition.to_ensemble(), decomposition)


def _degenerate_objective(t: float) -> Callable[[np.ndarray], np.ndarray]:
    scale = 2.0 * np.sqrt(t * (1.0 - t))
    return lambda r: binary_entropy(np.clip(r, 0.0, 1.0) * t) - f_curve(np.minimum(scale * np.clip(r, 0.0, 1.0), 1.0))


def capacity_degenerate(t: float, grid_points: int = DEGENERATE_GRID_POINTS) -> Tuple[float, float]:
    """
    max over r in [0, 1] of h(r t) - f(2 sqrt(t(1-t)) r): dense grid, then golden-section
    refinement inside the neighbouring grid points. Returns (value, r_star).
    """
    if not 0.0 < t <= 1.0:
        raise DomainError(f"degenerate channel parameter t={t} outside (0, 1]")

    objective = _degenerate_objective(t)
    grid = np.linspace(0.0, 1.0, grid_points)
    values = objective(grid)
    idx = int(np.argmax(values))
    best_value, r_star = float(values[idx]), float(grid[idx])

    if 0 < idx < grid_points - 1 and values[idx] > max(values[idx - 1], values[idx + 1]):
        res = so.minimize_scalar(
            lambda r: -float(objective(r)),
            bracket=(grid[idx - 1], grid[idx], grid[idx + 1]),
            method="golden",
        )
        if -res.fun > best_value and 0.0 <= res.x <= 1.0:
            best_value, r_star = -float(res.fun), float(res.x)

    logger.debug("capacity_degenerate t=%g: value %.15f at r*=%.12f", t, best_value, r_star)
    return best_value, r_star


def optimal_signal_report(channel: KrausChannel, theta: Optional[AntiHermOp] = None,
                          opt: Optional[OracleConfig] = None,
                          result: Optional[CapacityResult] = None) -> OptimalSignalReport:
    """Orthogonality of the optimal leaf pair and its mutual-information consistency."""
    if result is None:
        result = capacity(channel, theta, opt)
    overlap = result.leaf.overlap
    information = mutual_information(channel, result.ensemble)
    return OptimalSignalReport(
        overlap=overlap,
        orthogonal=overlap < ORTHOGONAL_TOL,
        mutual_information=information,
        capacity=result.value,
        consistent=abs(information - result.value) <= CONSISTENCY_TOL,
        degenerate_optimum=result.value < TRIVIAL_CAPACITY,
    )
