"""Random incoherent (IO) and strictly incoherent (SIO) Kraus channels, and
the Monte Carlo axiom suite for coherence measures."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial

import numpy as np

from ._pool import parallel_map
from .linalg import DimMismatchError, dephase, offdiag_max, validate_density
from .measures import (DEFAULT_CONFIG, EntropyConfig, MeasureId, c_rel_ent,
                       cross_terms, measure_value)
from .random_states import SeedStream, as_generator, random_density

__all__ = [
    "AXIOM_NAMES",
    "KrausSet",
    "AxiomReport",
    "random_io_kraus",
    "kraus_completeness_defect",
    "validate_kraus",
    "apply_channel",
    "selective_outcomes",
    "axiom_suite",
]

AXIOM_NAMES = ("nonnegativity", "faithfulness", "monotonicity",
               "strong_monotonicity", "convexity", "cross_dominance")


@dataclass(frozen=True)
class KrausSet:
    """Finite Kraus representation of an incoherent CPTP channel.

    Every operator column holds at most one nonzero entry (incoherent
    structure); strict sets also have at most one nonzero per row, making
    the duals incoherent too.
    """

    dim: int
    operators: tuple
    strict: bool = False


def kraus_completeness_defect(kraus: KrausSet) -> float:
    """Entrywise norm of sum(K† K) - I."""
    acc = np.zeros((kraus.dim, kraus.dim), dtype=complex)
    for op in kraus.operators:
        acc += op.conj().T @ op
    return float(np.abs(acc - np.eye(kraus.dim)).max())


def validate_kraus(kraus: KrausSet, tol: float = 1e-9) -> None:
    """Check completeness and the (strict) incoherence structure."""
    defect = kraus_completeness_defect(kraus)
    if defect > tol:
        raise ValueError(f"completeness defect {defect:.3e} exceeds {tol:.1e}")
    for op in kraus.operators:
        if op.shape != (kraus.dim, kraus.dim):
            raise DimMismatchError("operator shape does not match dim")
        nonzero = np.abs(op) > 1e-14
        if (nonzero.sum(axis=0) > 1).any():
            raise ValueError("an operator column has more than one nonzero entry")
        if kraus.strict and (nonzero.sum(axis=1) > 1).any():
            raise ValueError("a strict operator row has more than one nonzero entry")


def random_io_kraus(d: int, n: int, strict: bool = False, source=0) -> KrausSet:
    """Sample an n-operator incoherent channel on dimension d.

    strict=True: independent uniform permutation column maps per operator
    (one nonzero per row and column) with complex Gaussian amplitudes,
    normalized across operators per input column.

    strict=False: one uniform column map whose fibers are capped at n;
    columns sharing a target row receive orthonormal amplitude frames
    across the operators, so sum(K† K) = I holds exactly while single
    operators may carry several entries in one row (IO but generally
    not SIO).  Singleton columns reduce to the normalized-Gaussian rule.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    if n < 1:
        raise ValueError("need at least one Kraus operator")
    rng = as_generator(source)
    columns = np.arange(d)
    if strict:
        maps = np.stack([rng.permutation(d) for _ in range(n)])
        while True:
            amps = (rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d)))
            norms = np.sqrt((np.abs(amps) ** 2).sum(axis=0))
            if norms.min() > 1e-12:
                break
        amps /= norms
        ops = []
        for m in range(n):
            op = np.zeros((d, d), dtype=complex)
            op[maps[m], columns] = amps[m]
            ops.append(op)
        return KrausSet(dim=d, operators=tuple(ops), strict=True)

    while True:
        column_map = rng.integers(0, d, size=d)
        if np.bincount(column_map, minlength=d).max() <= n:
            break
    amps = np.zeros((n, d), dtype=complex)
    for row in range(d):
        cols = np.flatnonzero(column_map == row)
        if cols.size == 0:
            continue
        while True:
            z = (rng.standard_normal((n, cols.size))
                 + 1j * rng.standard_normal((n, cols.size)))
            if np.linalg.norm(z, axis=0).min() > 1e-9:
                break
        q, r = np.linalg.qr(z)
        phases = np.diagonal(r).copy()
        phases /= np.abs(phases)
        amps[:, cols] = q * phases
    ops = []
    for m in range(n):
        op = np.zeros((d, d), dtype=complex)
        op[column_map, columns] = amps[m]
        ops.append(op)
    return KrausSet(dim=d, operators=tuple(ops), strict=False)


def apply_channel(kraus: KrausSet, rho) -> np.ndarray:
    """rho' = sum K rho K†, revalidated."""
    m = np.asarray(rho, dtype=complex)
    if m.shape != (kraus.dim, kraus.dim):
        raise DimMismatchError(f"state shape {m.shape} vs channel dim {kraus.dim}")
    out = np.zeros_like(m)
    for op in kraus.operators:
        out += op @ m @ op.conj().T
    return validate_density(0.5 * (out + out.conj().T), tol=1e-8)


def selective_outcomes(kraus: KrausSet, rho, prob_floor: float = 1e-12):
    """Per-outcome (p_m, rho_m) pairs with p_m = Tr K rho K†; outcomes at or
    below prob_floor are omitted."""
    m = np.asarray(rho, dtype=complex)
    if m.shape != (kraus.dim, kraus.dim):
        raise DimMismatchError(f"state shape {m.shape} vs channel dim {kraus.dim}")
    outcomes = []
    for op in kraus.operators:
        sigma = op @ m @ op.conj().T
        prob = float(np.trace(sigma).real)
        if prob > prob_floor:
            state = validate_density(0.5 * (sigma + sigma.conj().T) / prob, tol=1e-8)
            outcomes.append((prob, state))
    return outcomes


@dataclass
class AxiomReport:
    """Aggregated axiom-suite result.

    checks counts (trial, chain-step) evaluation events; pass_counts and
    worst_margins are keyed by the axioms that were actually evaluated.
    mean_delta_a/mean_delta_b carry the cross-entropy asymmetry statistic
    (A_before - A_after vs B_before - B_after) for the cross measure.
    """

    measure: str
    trials: int
    checks: int
    pass_counts: dict
    worst_margins: dict
    failures: list = field(default_factory=list)
    mean_delta_a: float | None = None
    mean_delta_b: float | None = None

    @property
    def all_passed(self) -> bool:
        return not self.failures


def _axiom_trial(trial: int, *, master_seed: int, measure: MeasureId,
                 dims: tuple, kraus_range: tuple, strict: bool,
                 cfg: EntropyConfig, tol: float, chain_steps: int,
                 fresh_channels: bool, incoherence_tol: float,
                 prob_floor: float) -> dict:
    rng = SeedStream(master_seed, trial).generator()
    d = int(dims[rng.integers(len(dims))])
    needs_full_rank = measure.tag in ("c_cross", "c_cross_partial")
    rank = d if needs_full_rank else int(rng.integers(1, d + 1))
    method = "ginibre" if rng.integers(2) == 0 else "spectrum-haar"
    state = random_density(d, rank, method, rng)
    n_ops = int(rng.integers(kraus_range[0], kraus_range[1] + 1))
    kraus = random_io_kraus(d, n_ops, strict, rng)

    events = []
    deltas = []
    for step in range(chain_steps):
        if step > 0 and fresh_channels:
            n_ops = int(rng.integers(kraus_range[0], kraus_range[1] + 1))
            kraus = random_io_kraus(d, n_ops, strict, rng)
        value = measure_value(measure, state, cfg)
        after = apply_channel(kraus, state)
        value_after = measure_value(measure, after, cfg)

        def check(axiom, passed, margin):
            events.append((axiom, bool(passed), float(margin), step))

        check("nonnegativity", value >= -tol, value)
        deph_value = measure_value(measure, dephase(state), cfg)
        consistent = (value <= tol) == (offdiag_max(state) <= incoherence_tol)
        check("faithfulness", consistent and deph_value <= tol,
              tol - deph_value if consistent else -abs(value - tol))
        check("monotonicity", value_after <= value + tol, value - value_after)
        averaged = sum(p * measure_value(measure, outcome, cfg)
                       for p, outcome in selective_outcomes(kraus, state, prob_floor))
        check("strong_monotonicity", averaged <= value + tol, value - averaged)
        mix_states = [random_density(d, d if needs_full_rank else int(rng.integers(1, d + 1)),
                                     "ginibre" if rng.integers(2) == 0 else "spectrum-haar",
                                     rng)
                      for _ in range(3)]
        weights = rng.standard_exponential(3)
        weights /= weights.sum()
        mixture = sum(w * s for w, s in zip(weights, mix_states))
        mix_bound = sum(w * measure_value(measure, s, cfg)
                        for w, s in zip(weights, mix_states))
        mix_value = measure_value(measure, validate_density(mixture, tol=1e-8), cfg)
        check("convexity", mix_value <= mix_bound + tol, mix_bound - mix_value)
        if measure.tag == "c_cross":
            dominance = value - c_rel_ent(state, cfg)
            check("cross_dominance", dominance >= -tol, dominance)
            a_before, b_before = cross_terms(state, cfg)
            a_after, b_after = cross_terms(after, cfg)
            deltas.append((a_before - a_after, b_before - b_after))
        state = after
    return {"trial": trial, "d": d, "events": events, "deltas": deltas}


def axiom_suite(measure, dims, trials: int, kraus_range=(1, 6),
                strict: bool = False, cfg: EntropyConfig = DEFAULT_CONFIG,
                seed: int = 0, *, tol: float = 1e-8, chain_steps: int = 1,
                fresh_channels: bool = True, incoherence_tol: float = 1e-9,
                prob_floor: float = 1e-12, workers: int = 1) -> AxiomReport:
    """Monte Carlo check of the coherence-measure axioms under sampled
    incoherent channels.

    Per trial (stream_index = trial number): draw a state (full-rank when
    the measure is cross-entropy based), draw a channel with an operator
    count in kraus_range, and record nonnegativity, faithfulness,
    monotonicity, strong monotonicity, convexity and (for the cross
    measure) cross dominance plus the Delta-A/Delta-B asymmetry.
    Failures are data, not errors.
    """
    mid = measure if isinstance(measure, MeasureId) else MeasureId(measure)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dims = tuple(int(d) for d in dims)
    if mid.tag in ("c_cross", "c_cross_partial") and cfg.regularization_eta <= 0:
        raise ValueError("cross-entropy measures need regularization_eta > 0 "
                         "inside the axiom suite (channel outputs may lose rank)")
    if mid.k is not None and mid.k >= min(dims):
        raise ValueError(f"k={mid.k} must stay below the smallest dimension")
    runner = partial(
        _axiom_trial, master_seed=int(seed), measure=mid, dims=dims,
        kraus_range=(int(kraus_range[0]), int(kraus_range[1])), strict=strict,
        cfg=cfg, tol=tol, chain_steps=int(chain_steps),
        fresh_channels=fresh_channels, incoherence_tol=incoherence_tol,
        prob_floor=prob_floor)
    results = parallel_map(runner, range(trials), workers=workers)

    pass_counts: dict = {}
    worst: dict = {}
    failures: list = []
    checks = 0
    delta_a: list = []
    delta_b: list = []
    for res in results:
        step_seen = set()
        for axiom, passed, margin, step in res["events"]:
            step_seen.add(step)
            pass_counts[axiom] = pass_counts.get(axiom, 0) + int(passed)
            worst[axiom] = min(worst.get(axiom, np.inf), margin)
            if not passed:
                failures.append({
                    "seed": int(seed),
                    "stream_index": res["trial"],
                    "measure": mid.label,
                    "axiom": axiom,
                    "margin": margin,
                    "d": res["d"],
                    "step": step,
                })
        checks += len(step_seen)
        for da, db in res["deltas"]:
            delta_a.append(da)
            delta_b.append(db)
    return AxiomReport(
        measure=mid.label,
        trials=trials,
        checks=checks,
        pass_counts=pass_counts,
        worst_margins={k: float(v) for k, v in worst.items()},
        failures=failures,
        mean_delta_a=float(np.mean(delta_a)) if delta_a else None,
        mean_delta_b=float(np.mean(delta_b)) if delta_b else None,
    )
