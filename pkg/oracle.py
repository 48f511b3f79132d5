"""
Brute-force variational oracles for the entropy roof, the channel concurrence
and the Holevo quantity, searched over pure-state decompositions of a qubit state.
"""
import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from channels import KrausChannel, apply, apply_many
from exceptions import InvariantViolation
from linalg2 import (
    IDENTITY, PAULIS, DensityOp, PureState, det2, f_curve, relative_entropy,
    von_neumann_entropy,
)

logger = logging.getLogger(__name__)

PURE_TOL = 1e-12
MIX_GRID_POINTS = 65
MIX_SPLIT_FRACTIONS = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class Ensemble:
    """Pure states with simplex weights averaging to a given density operator."""

    states: Tuple[PureState, ...]
    weights: Tuple[float, ...]
    average: DensityOp

    def __post_init__(self):
        states = tuple(self.states)
        weights = tuple(float(w) for w in self.weights)
        if not 1 <= len(states) <= 4 or len(states) != len(weights):
            raise InvariantViolation(
                "ensemble_size", f"{len(states)} states with {len(weights)} weights"
            )
        if min(weights) < -PURE_TOL:
            raise InvariantViolation("simplex", f"negative weight {min(weights):.3e}", min(weights))
        total = sum(weights)
        if abs(total - 1.0) > PURE_TOL:
            raise InvariantViolation("simplex", f"weights sum to {total:.15f}", total)
        mixture = sum(w * s.projector for w, s in zip(weights, states))
        gap = float(np.max(np.abs(mixture - self.average.mat)))
        if gap > 1e-9:
            raise InvariantViolation("average", f"mixture deviates from the average by {gap:.3e}", gap)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def bloch_vectors(self) -> np.ndarray:
        return np.array([s.bloch for s in self.states])


@dataclass(frozen=True)
class OracleConfig:
    """Search budget for the brute-force oracles."""

    restarts: int = 16
    grid: int = 64
    seed: int = 42
    refine_iters: int = 200
    tol: float = 1e-12

    def __post_init__(self):
        if self.restarts < 1:
            raise InvariantViolation("restarts", f"restarts must be >= 1, got {self.restarts}")
        if self.grid < 8:
            raise InvariantViolation("grid", f"grid must be >= 8, got {self.grid}")
        if self.refine_iters < 0:
            raise InvariantViolation("refine_iters", f"refine_iters must be >= 0, got {self.refine_iters}")

    @classmethod
    def from_config(cls, cfg, **overrides) -> "OracleConfig":
        settings = cfg.get_oracle_config()
        settings.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**settings)


class OracleResult(NamedTuple):
    value: float
    ensemble: Ensemble


def _grid_angles(grid: int) -> Tuple[np.ndarray, np.ndarray]:
    """Polar and azimuthal angles of the equal-area (grid x grid) sphere grid."""
    z = 1.0 - (2.0 * np.arange(grid) + 1.0) / grid
    phi = 2.0 * np.pi * (np.arange(grid) + 0.5) / grid
    polar, azimuth = np.meshgrid(np.arccos(z), phi, indexing="ij")
    return polar.ravel(), azimuth.ravel()


def _directions(polar: np.ndarray, azimuth: np.ndarray) -> np.ndarray:
    sin = np.sin(polar)
    return np.stack([sin * np.cos(azimuth), sin * np.sin(azimuth), np.cos(polar)], axis=-1)


def sphere_grid(grid: int) -> np.ndarray:
    """Unit directions on equal-area latitude bands, shape (grid * grid, 3)."""
    return _directions(*_grid_angles(grid))


def _chord_split(bloch: np.ndarray, directions: np.ndarray):
    """
    Sphere intersections of the chords through bloch along each direction, with weights.

    bloch (..., 3) broadcasts against directions (D, 3).
    """
    along = np.sum(directions * bloch, axis=-1)
    disc = np.sqrt(np.maximum(along ** 2 + 1.0 - np.sum(bloch * bloch, axis=-1), 0.0))
    s_plus, s_minus = -along + disc, -along - disc
    width = s_plus - s_minus
    plus = bloch + s_plus[..., None] * directions
    minus = bloch + s_minus[..., None] * directions
    plus /= np.linalg.norm(plus, axis=-1, keepdims=True)
    minus /= np.linalg.norm(minus, axis=-1, keepdims=True)
    return plus, minus, -s_minus / width, s_plus / width


def _is_pure(rho: DensityOp) -> bool:
    return float(np.linalg.norm(rho.bloch)) >= 1.0 - PURE_TOL


def chord_ensemble(rho: DensityOp, direction) -> Ensemble:
    """
    Two-state ensemble from the chord through the Bloch point of rho.

    A pure rho gives the singleton ensemble.
    """
    bloch = rho.bloch
    if _is_pure(rho):
        return Ensemble((PureState.from_bloch(bloch),), (1.0,), rho)
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    plus, minus, p_plus, p_minus = _chord_split(bloch, n[None, :])
    return Ensemble(
        (PureState.from_bloch(plus[0]), PureState.from_bloch(minus[0])),
        (float(p_plus[0]), float(p_minus[0])),
        rho,
    )


def _pure_output_dets(channel: KrausChannel) -> Callable[[np.ndarray], np.ndarray]:
    """det T(pi) as a function of the Bloch vectors of pure inputs, via the affine output map."""
    images = apply_many(channel, np.stack([IDENTITY, *PAULIS]))

    def dets(bloch: np.ndarray) -> np.ndarray:
        outputs = 0.5 * (images[0] + np.einsum("...k,kij->...ij", bloch, images[1:]))
        return np.clip(np.real(det2(outputs)), 0.0, 0.25)

    return dets


def _entropy_objective(channel: KrausChannel) -> Callable[[np.ndarray], np.ndarray]:
    dets = _pure_output_dets(channel)
    return lambda bloch: f_curve(np.minimum(2.0 * np.sqrt(dets(bloch)), 1.0))


def _concurrence_objective(channel: KrausChannel) -> Callable[[np.ndarray], np.ndarray]:
    dets = _pure_output_dets(channel)
    return lambda bloch: np.sqrt(dets(bloch))


def _chord_values(objective, bloch: np.ndarray, polar: np.ndarray, azimuth: np.ndarray) -> np.ndarray:
    plus, minus, p_plus, p_minus = _chord_split(bloch, _directions(polar, azimuth))
    return p_plus * objective(plus) + p_minus * objective(minus)


def _refine(objective, bloch, polar, azimuth, cfg: OracleConfig, step0: float):
    """Coordinate descent on (polar, azimuth), all restarts in lockstep, with step halving."""
    params = np.stack([polar, azimuth], axis=1)
    best = _chord_values(objective, bloch, params[:, 0], params[:, 1])
    step = np.full(len(params), step0)

    for _ in range(cfg.refine_iters):
        improved = np.zeros(len(params), dtype=bool)
        for coord in (0, 1):
            for sign in (1.0, -1.0):
                trial = params.copy()
                trial[:, coord] += sign * step
                values = _chord_values(objective, bloch, trial[:, 0], trial[:, 1])
                better = values < best
                params[better] = trial[better]
                best[better] = values[better]
                improved |= better
        step = np.where(improved, step, 0.5 * step)
        if np.all(step < cfg.tol):
            break
    return params, best


def _split_reach(bloch: np.ndarray, direction: np.ndarray) -> Tuple[float, float]:
    """Distances from bloch to the sphere along +direction and -direction."""
    along = float(direction @ bloch)
    disc = float(np.sqrt(max(along ** 2 + 1.0 - bloch @ bloch, 0.0)))
    return -along + disc, along + disc


def _best_chords(objective, points: np.ndarray, polar: np.ndarray, azimuth: np.ndarray):
    """Lowest grid chord value at each of the (P, 3) points, with its grid index."""
    values = _chord_values(objective, points[:, None, :], polar, azimuth)
    idx = np.argmin(values, axis=1)
    return values[np.arange(len(points)), idx], idx


def _perpendicular_pair(direction: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    axis = np.eye(3)[int(np.argmin(np.abs(direction)))]
    first = np.cross(direction, axis)
    first /= np.linalg.norm(first)
    return first, np.cross(direction, first)


def _mixed_layer(objective, rho: DensityOp, direction, cfg: OracleConfig) -> OracleResult:
    """
    Four-state ensemble splitting rho into lam * rho1 + (1 - lam) * rho2 along a line.

    rho1 = rho + a v and rho2 = rho - b v with lam a = (1 - lam) b; each point
    is decomposed along its own best chord. lam is scanned on the interior of
    a MIX_GRID_POINTS grid, a over fractions of the reach inside the ball,
    then both are refined with a bounded scalar search.
    """
    bloch = rho.bloch
    v = np.asarray(direction, dtype=float)
    v = v / np.linalg.norm(v)
    forward, backward = _split_reach(bloch, v)
    scan = max(8, cfg.grid // 2)
    polar, azimuth = _grid_angles(scan)

    def offsets(lam, frac):
        a = frac * np.minimum(forward, backward * (1.0 - lam) / lam)
        return a, lam * a / (1.0 - lam)

    def totals(lam, frac):
        lam, frac = np.atleast_1d(lam), np.atleast_1d(frac)
        a, b = offsets(lam, frac)
        first, _ = _best_chords(objective, bloch + a[:, None] * v, polar, azimuth)
        second, _ = _best_chords(objective, bloch - b[:, None] * v, polar, azimuth)
        return lam * first + (1.0 - lam) * second

    lambdas = np.linspace(0.0, 1.0, MIX_GRID_POINTS)[1:-1]
    lam_grid, frac_grid = (g.ravel() for g in np.meshgrid(lambdas, MIX_SPLIT_FRACTIONS, indexing="ij"))
    k = int(np.argmin(totals(lam_grid, frac_grid)))
    lam, frac = float(lam_grid[k]), float(frac_grid[k])

    step = 1.0 / (MIX_GRID_POINTS - 1)
    res = minimize_scalar(lambda x: float(totals(x, frac)[0]),
                          bounds=(max(lam - step, 0.5 * step), min(lam + step, 1.0 - 0.5 * step)),
                          method="bounded")
    if res.fun < float(totals(lam, frac)[0]):
        lam = float(res.x)
    res = minimize_scalar(lambda x: float(totals(lam, x)[0]),
                          bounds=(MIX_SPLIT_FRACTIONS[0], MIX_SPLIT_FRACTIONS[-1]), method="bounded")
    if res.fun < float(totals(lam, frac)[0]):
        frac = float(res.x)

    a, b = offsets(lam, frac)
    parts = []
    for point in (bloch + a * v, bloch - b * v):
        _, idx = _best_chords(objective, point[None, :], polar, azimuth)
        i = int(idx[0])
        params, _ = _refine(objective, point, polar[i:i + 1], azimuth[i:i + 1], cfg, 0.5 * np.pi / scan)
        parts.append(chord_ensemble(DensityOp.from_bloch(point), _directions(params[0, 0], params[0, 1])))

    first, second = parts
    ensemble = Ensemble(
        first.states + second.states,
        tuple(lam * w for w in first.weights) + tuple((1.0 - lam) * w for w in second.weights),
        rho,
    )
    value = float(np.dot(ensemble.weights, objective(ensemble.bloch_vectors)))
    return OracleResult(value, ensemble)


def _search(channel: KrausChannel, rho: DensityOp, cfg: OracleConfig, objective, label: str) -> OracleResult:
    bloch = rho.bloch
    if _is_pure(rho):
        value = float(objective(bloch[None, :] / np.linalg.norm(bloch))[0])
        return OracleResult(value, chord_ensemble(rho, (0.0, 0.0, 1.0)))

    polar, azimuth = _grid_angles(cfg.grid)
    grid_values = _chord_values(objective, bloch, polar, azimuth)
    order = np.argsort(grid_values, kind="stable")

    # restart 0 starts from the best cell, the rest from jittered runners-up
    cell = np.pi / cfg.grid
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    starts = np.empty((cfg.restarts, 2))
    for k, child in enumerate(children):
        idx = order[k % len(order)]
        starts[k] = polar[idx], azimuth[idx]
        if k > 0:
            starts[k] += np.random.default_rng(child).uniform(-0.5, 0.5, size=2) * cell

    params, values = _refine(objective, bloch, starts[:, 0], starts[:, 1], cfg, 0.5 * cell)
    best_k = int(np.argmin(values))
    best_dir = _directions(params[best_k, 0], params[best_k, 1])
    best = OracleResult(float(values[best_k]), chord_ensemble(rho, best_dir))

    # four-state layer: split rho across the best chord
    for v in _perpendicular_pair(best_dir):
        mixed = _mixed_layer(objective, rho, v, cfg)
        if mixed.value < best.value:
            logger.info("%s oracle: four-state ensemble %.12g beats chord %.12g", label, mixed.value, best.value)
            best = mixed

    logger.debug("%s oracle: grid best %.12g, refined %.12g over %d restarts",
                 label, float(grid_values[order[0]]), best.value, cfg.restarts)
    return best


def mixed_chord_search(channel: KrausChannel, rho: DensityOp, direction,
                       cfg: Optional[OracleConfig] = None) -> OracleResult:
    """Best four-state entropy-roof ensemble splitting an interior rho along direction."""
    if _is_pure(rho):
        raise InvariantViolation("interior", "a pure state has no mixed split")
    return _mixed_layer(_entropy_objective(channel), rho, direction, cfg or OracleConfig())


def oracle_entropy_roof(channel: KrausChannel, rho: DensityOp,
                        cfg: Optional[OracleConfig] = None) -> OracleResult:
    """min sum_j p_j S(T(pi_j)) over pure decompositions of rho."""
    return _search(channel, rho, cfg or OracleConfig(), _entropy_objective(channel), "entropy roof")


def oracle_concurrence(channel: KrausChannel, rho: DensityOp,
                       cfg: Optional[OracleConfig] = None) -> float:
    """min sum_j p_j sqrt(det T(pi_j)) over pure decompositions of rho."""
    return _search(channel, rho, cfg or OracleConfig(), _concurrence_objective(channel), "concurrence").value


def mutual_information(channel: KrausChannel, ensemble: Ensemble) -> float:
    """sum_j p_j S(T(pi_j) || T(average)), in bits."""
    average_out = apply(channel, ensemble.average)
    total = 0.0
    for weight, state in zip(ensemble.weights, ensemble.states):
        if weight <= 0.0:
            continue
        total += weight * relative_entropy(apply(channel, state.density), average_out)
    return float(total)


def oracle_channel_entropy(channel: KrausChannel, rho: DensityOp,
                           cfg: Optional[OracleConfig] = None) -> OracleResult:
    """S_T(rho) minus the oracle entropy roof, with the achieving ensemble."""
    roof = oracle_entropy_roof(channel, rho, cfg)
    value = von_neumann_entropy(apply(channel, rho)) - roof.value
    return OracleResult(max(value, 0.0), roof.ensemble)
