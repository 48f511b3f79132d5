"""
Seeded sample generators for qubit channels and states
Random Kraus pairs, span channels, density operators, pure states and unitaries
"""
from typing import Tuple

import numpy as np

from channels import KrausChannel
from linalg2 import DensityOp, PureState

DEFAULT_SEED = 42


def make_rng(seed: int = DEFAULT_SEED) -> np.random.Generator:
    """Generator seeded through a SeedSequence"""
    return np.random.default_rng(np.random.SeedSequence(seed))


def random_disc_matrix(rng: np.random.Generator) -> np.ndarray:
    """2x2 complex matrix with entries uniform in the unit disc"""
    radius = np.sqrt(rng.uniform(0.0, 1.0, size=(2, 2)))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=(2, 2))
    return radius * np.exp(1j * angle)


def random_kraus_pair(rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Unnormalized pair (A, B), entries uniform in the unit disc"""
    return random_disc_matrix(rng), random_disc_matrix(rng)


def _cptp_normalize(ops) -> Tuple[np.ndarray, ...]:
    """A_j M^(-1/2) with M = sum A_j^dagger A_j"""
    total = sum(np.conj(op.T) @ op for op in ops)
    eigvals, eigvecs = np.linalg.eigh(total)
    inv_sqrt = eigvecs @ np.diag(1.0 / np.sqrt(eigvals)) @ np.conj(eigvecs.T)
    return tuple(op @ inv_sqrt for op in ops)


def random_pair_channel(rng: np.random.Generator) -> KrausChannel:
    """Trace-preserving channel from a random Kraus pair"""
    return KrausChannel(_cptp_normalize(random_kraus_pair(rng)), name="random-pair")


def random_span_channel(rng: np.random.Generator, count: int = None) -> KrausChannel:
    """3-4 Kraus operators drawn from the span of a random pair, made trace preserving"""
    count = count or int(rng.integers(3, 5))
    a, b = random_kraus_pair(rng)
    coeffs = rng.normal(size=(count, 2)) + 1j * rng.normal(size=(count, 2))
    ops = [c[0] * a + c[1] * b for c in coeffs]
    return KrausChannel(_cptp_normalize(ops), name=f"random-span-{count}")


def near_parallel_channel(rng: np.random.Generator, eps: float) -> KrausChannel:
    """Kraus operators (A, A + eps B, B) of a random pair, made trace preserving"""
    a, b = random_kraus_pair(rng)
    return KrausChannel(_cptp_normalize([a, a + eps * b, b]), name=f"near-parallel-{eps:g}")


def random_pure_state(rng: np.random.Generator) -> PureState:
    """Haar-random ket"""
    amp = rng.normal(size=2) + 1j * rng.normal(size=2)
    return PureState.from_amplitudes(amp[0], amp[1], normalize=True)


def random_pure_amplitudes(rng: np.random.Generator, count: int) -> np.ndarray:
    """(count, 2) array of Haar-random unit kets"""
    amp = rng.normal(size=(count, 2)) + 1j * rng.normal(size=(count, 2))
    return amp / np.linalg.norm(amp, axis=1, keepdims=True)


def random_density(rng: np.random.Generator, max_radius: float = 1.0) -> DensityOp:
    """State uniform in the Bloch ball of the given radius"""
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    radius = max_radius * np.cbrt(rng.uniform())
    return DensityOp.from_bloch(radius * direction)


def random_interior_density(rng: np.random.Generator) -> DensityOp:
    """Strictly mixed state, Bloch radius at most 0.95"""
    return random_density(rng, max_radius=0.95)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary via QR with phase correction"""
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_symmetric(rng: np.random.Generator) -> np.ndarray:
    """Random complex symmetric 2x2 matrix"""
    m = random_disc_matrix(rng)
    return 0.5 * (m + m.T)


def generate_all_samples(seed: int = DEFAULT_SEED, count: int = 5) -> dict:
    """Reproducible bundle of sample channels and states"""
    rng = make_rng(seed)
    return {
        "pair_channels": [random_pair_channel(rng) for _ in range(count)],
        "span_channels": [random_span_channel(rng) for _ in range(count)],
        "states": [random_interior_density(rng) for _ in range(count)],
    }


if __name__ == "__main__":
    from antilinear import theta_from_channel
    from roofs import channel_concurrence

    samples = generate_all_samples()
    print("Sample channels (seed 42):")
    for channel, rho in zip(samples["pair_channels"], samples["states"]):
        theta = theta_from_channel(channel)
        print(f"  {channel.name}: |det Theta| = {abs(theta.alpha * theta.delta - theta.beta ** 2):.6f}, "
              f"C_T = {channel_concurrence(theta, rho):.6f}")
