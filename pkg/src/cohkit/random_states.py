"""Deterministically seeded random ensembles: Haar unitaries, random density
matrices, and coherence-walk trajectories."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import validate_density, validate_spectrum
from .measures import DEFAULT_CONFIG, EntropyConfig, c_l1, tsallis2, von_neumann_entropy

__all__ = [
    "InvalidRankError",
    "SeedStream",
    "Trajectory",
    "as_generator",
    "haar_unitary",
    "random_density",
    "from_spectrum",
    "coherence_walk",
]

DENSITY_METHODS = ("ginibre", "spectrum-haar")


class InvalidRankError(ValueError):
    pass


@dataclass(frozen=True)
class SeedStream:
    """Pure (master_seed, stream_index) -> generator map.

    Distinct stream indices spawn statistically independent streams, so
    parallel Monte Carlo assigns one stream per trial and stays
    schedule-independent.
    """

    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.master_seed,
                                     spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(seq))


def as_generator(source) -> np.random.Generator:
    """Accept a Generator, a SeedStream, or a bare integer seed."""
    if isinstance(source, np.random.Generator):
        return source
    if isinstance(source, SeedStream):
        return source.generator()
    return SeedStream(int(source)).generator()


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def haar_unitary(d: int, source) -> np.ndarray:
    """Haar-random unitary: QR of a complex Gaussian matrix with the
    R-diagonal phase correction."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    rng = as_generator(source)
    q, r = np.linalg.qr(_complex_normal(rng, (d, d)))
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_density(d: int, rank: int | None = None, method: str = "ginibre",
                   source=0) -> np.ndarray:
    """Random density matrix of dimension d and target rank.

    ginibre: G G†/Tr with G a d x rank complex Gaussian matrix.
    spectrum-haar: U diag(lam) U† with lam uniform on the rank-restricted
    simplex (exponential normalization) and U Haar.
    """
    rng = as_generator(source)
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise InvalidRankError(f"rank {rank} outside 1..{d}")
    if method == "ginibre":
        g = _complex_normal(rng, (d, rank))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        return validate_density(rho)
    if method == "spectrum-haar":
        draws = rng.standard_exponential(rank)
        lam = np.zeros(d)
        lam[:rank] = np.sort(draws / draws.sum())[::-1]
        return from_spectrum(lam, rng)
    raise ValueError(f"unknown method {method!r}; expected one of {DENSITY_METHODS}")


def from_spectrum(spectrum, source) -> np.ndarray:
    """Haar-rotated state with the given spectrum: U diag(lam) U†."""
    lam = validate_spectrum(spectrum)
    u = haar_unitary(lam.size, source)
    rho = (u * lam) @ u.conj().T
    return validate_density(0.5 * (rho + rho.conj().T))


@dataclass
class Trajectory:
    """Coherence-walk output.

    states[0] is the (validated) initial state and states[t] the state after
    step t; records row t holds (c_l1, s2, svn) for states[t]; accepted[t-1]
    says whether step t moved the state or stalled into a no-op.
    """

    states: list
    records: np.ndarray
    accepted: np.ndarray


def coherence_walk(rho0, steps: int, strength: float, source,
                   cfg: EntropyConfig = DEFAULT_CONFIG,
                   psd_floor: float = -1e-12, max_halvings: int = 40) -> Trajectory:
    """Inject coherence gradually while preserving the diagonal exactly.

    One zero-diagonal Hermitian Gaussian direction is drawn for the
    trajectory; step t proposes adding it scaled by (t * strength), halving
    the scale until the candidate stays PSD.  Steps whose halvings run out
    are recorded as no-ops.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if strength < 0:
        raise ValueError("strength must be >= 0")
    rng = as_generator(source)
    state = validate_density(rho0, tol=1e-8)
    d = state.shape[0]
    raw = _complex_normal(rng, (d, d))
    direction = 0.5 * (raw + raw.conj().T)
    np.fill_diagonal(direction, 0.0)

    def record(rho):
        return (c_l1(rho), tsallis2(rho), von_neumann_entropy(rho, cfg))

    states = [state]
    records = [record(state)]
    accepted = np.zeros(steps, dtype=bool)
    for step in range(1, steps + 1):
        scale = step * strength
        moved = False
        for _ in range(max_halvings + 1):
            candidate = state + scale * direction
            if np.linalg.eigvalsh(candidate).min() >= psd_floor:
                moved = True
                break
            scale *= 0.5
        if moved:
            state = candidate
            accepted[step - 1] = True
        states.append(state)
        records.append(record(state))
    return Trajectory(states=states, records=np.asarray(records), accepted=accepted)
