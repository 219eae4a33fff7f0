"""Entropy functionals and coherence measures of density matrices.

All quantities default to bits (base-2 logs); pass an EntropyConfig with
log_base = math.e for nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import dephase, eigh

__all__ = [
    "EntropyConfig",
    "DEFAULT_CONFIG",
    "MeasureId",
    "MEASURE_TAGS",
    "NotNormalizedError",
    "InvalidKError",
    "SingularSupportError",
    "shannon_entropy",
    "von_neumann_entropy",
    "tsallis2",
    "c_rel_ent",
    "c_l1",
    "c_rel_partial",
    "cross_terms",
    "c_cross",
    "c_cross_partial",
    "c2_measure",
    "measure_value",
]


class NotNormalizedError(ValueError):
    pass


class InvalidKError(ValueError):
    pass


class SingularSupportError(ArithmeticError):
    """-Tr[diag(rho) log rho] diverges: rho has a null eigenvector that
    overlaps the support of the dephased state."""


@dataclass(frozen=True)
class EntropyConfig:
    """Units and numerical conventions for entropy-like quantities.

    log_base: 2 (bits, default) or math.e (nats).
    support_epsilon: probabilities at or below this count as exact zeros,
        with the 0 log 0 = 0 convention.
    regularization_eta: when positive, cross-entropy terms mix the state
        with eta * I/d first, keeping them finite on rank-deficient inputs.
    """

    log_base: float = 2.0
    support_epsilon: float = 1e-12
    regularization_eta: float = 0.0

    def __post_init__(self):
        if self.log_base not in (2, 2.0, math.e):
            raise ValueError("log_base must be 2 or math.e")
        if self.support_epsilon < 0:
            raise ValueError("support_epsilon must be >= 0")
        if not 0.0 <= self.regularization_eta < 1.0:
            raise ValueError("regularization_eta must be in [0, 1)")

    def log(self, x):
        return np.log2(x) if self.log_base == 2.0 else np.log(x)


DEFAULT_CONFIG = EntropyConfig()

MEASURE_TAGS = ("c_r", "c_l1", "c_cross", "c_r_partial", "c_cross_partial", "c2")


@dataclass(frozen=True)
class MeasureId:
    """Named coherence measure, with the restriction order k where relevant."""

    tag: str
    k: int | None = None

    def __post_init__(self):
        if self.tag not in MEASURE_TAGS:
            raise ValueError(f"unknown measure {self.tag!r}; expected one of {MEASURE_TAGS}")
        if self.tag.endswith("_partial"):
            if self.k is None or int(self.k) < 1:
                raise InvalidKError(f"{self.tag} needs k >= 1")
        elif self.k is not None:
            raise ValueError(f"{self.tag} takes no k")

    @property
    def label(self) -> str:
        return self.tag if self.k is None else f"{self.tag}_k{self.k}"


def shannon_entropy(probabilities, cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """H(p) = -sum p_i log p_i for a probability vector."""
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1:
        raise NotNormalizedError("expected a 1-d probability vector")
    if p.size and p.min() < -1e-10:
        raise NotNormalizedError(f"negative probability {p.min():.3e}")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-8:
        raise NotNormalizedError(f"probabilities sum to {total!r}")
    mask = p > cfg.support_epsilon
    h = float(-(p[mask] * cfg.log(p[mask])).sum())
    return h if h > 0.0 else 0.0


def von_neumann_entropy(rho, cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """S(rho) = H(spectrum of rho)."""
    return shannon_entropy(eigh(rho).spectrum, cfg)


def tsallis2(state_or_spectrum) -> float:
    """Tsallis-2 (linear) entropy: 1 - sum lam_i^2, equivalently 1 - Tr rho^2.

    Accepts a spectrum (1-d) or a density matrix (2-d); the matrix form
    needs no diagonalization.
    """
    x = np.asarray(state_or_spectrum)
    if x.ndim == 1:
        lam = x.astype(float)
        return float(1.0 - (lam * lam).sum())
    if x.ndim != 2:
        raise ValueError("expected a spectrum or a square matrix")
    return float(1.0 - np.vdot(x, x).real)


def c_rel_ent(rho, cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """Relative entropy of coherence S(dephase(rho)) - S(rho)."""
    return von_neumann_entropy(dephase(rho), cfg) - von_neumann_entropy(rho, cfg)


def c_l1(rho) -> float:
    """l1 coherence: the summed magnitude of all off-diagonal entries."""
    m = np.asarray(rho, dtype=complex)
    return float(np.abs(m).sum() - np.abs(np.diagonal(m)).sum())


def _top_k_entropy(values, k: int, cfg: EntropyConfig) -> float:
    v = np.sort(np.asarray(values, dtype=float))[::-1][:k]
    mask = v > cfg.support_epsilon
    return float(-(v[mask] * cfg.log(v[mask])).sum())


def c_rel_partial(rho, k: int, cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """Partial relative entropy of coherence.

    Applies the top-k restricted entropy S^k(v) = -sum_{i<=k} v_i^ log v_i^
    to the sorted diagonal and the sorted spectrum and returns the difference.
    """
    m = np.asarray(rho, dtype=complex)
    d = m.shape[0]
    if not 1 <= k <= d:
        raise InvalidKError(f"k={k} outside 1..{d}")
    diag = np.real(np.diagonal(m))
    spectrum = eigh(m).spectrum
    return _top_k_entropy(diag, k, cfg) - _top_k_entropy(spectrum, k, cfg)


def _regularized(m: np.ndarray, cfg: EntropyConfig) -> np.ndarray:
    if cfg.regularization_eta <= 0.0:
        return m
    eta = cfg.regularization_eta
    d = m.shape[0]
    return (1.0 - eta) * m + (eta / d) * np.eye(d, dtype=complex)


def cross_terms(rho, cfg: EntropyConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """The two cross-entropy traces (A, B) of a state against its dephasing.

    A = -Tr[diag(rho) log rho], via the eigendecomposition of rho;
    B = -Tr[rho log diag(rho)], via the matrix trace, which collapses to
    the Shannon entropy of the diagonal.

    Raises SingularSupportError when A diverges (a zero eigenvalue of rho
    whose eigenvector overlaps the dephased support); mixing with
    regularization_eta > 0 keeps A finite instead.
    """
    m = _regularized(np.asarray(rho, dtype=complex), cfg)
    dec = eigh(m)
    lam, vecs = dec.spectrum, dec.eigenvectors
    diag = np.real(np.diagonal(m))
    weights = (np.abs(vecs) ** 2 * diag[:, None]).sum(axis=0)
    dead = lam <= cfg.support_epsilon
    if np.any(dead & (weights > cfg.support_epsilon)):
        raise SingularSupportError(
            "S(rho_diag||rho) diverges on a rank-deficient state; "
            "set regularization_eta > 0 to regularize")
    live = ~dead
    a_term = float(-(weights[live] * cfg.log(lam[live])).sum())
    dmask = diag > cfg.support_epsilon
    b_term = float(-(diag[dmask] * cfg.log(diag[dmask])).sum())
    return a_term, b_term


def c_cross(rho, cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """Relative cross-entropy of coherence: A - B from :func:`cross_terms`."""
    a_term, b_term = cross_terms(rho, cfg)
    return a_term - b_term


def c_cross_partial(rho, k: int, cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """Partial relative cross-entropy of coherence.

    A^k sums the k largest diagonal weights d_i against (log rho)_ii in the
    original basis; B^k sums the k largest eigenvalues against
    <v_i| log diag(rho) |v_i>.  Both reduce to the full traces at k = d.
    Requires full support (or regularization_eta > 0).
    """
    m = np.asarray(rho, dtype=complex)
    d = m.shape[0]
    if not 1 <= k <= d:
        raise InvalidKError(f"k={k} outside 1..{d}")
    m = _regularized(m, cfg)
    dec = eigh(m)
    lam, vecs = dec.spectrum, dec.eigenvectors
    diag = np.real(np.diagonal(m))
    if lam[-1] <= cfg.support_epsilon or diag.min() <= cfg.support_epsilon:
        raise SingularSupportError(
            "partial cross-entropy needs a full-support state; "
            "set regularization_eta > 0 to regularize")
    probe = np.abs(vecs) ** 2
    log_rho_diag_entries = probe @ cfg.log(lam)          # (log rho)_ii
    order = np.argsort(diag)[::-1][:k]
    a_k = float(-(diag[order] * log_rho_diag_entries[order]).sum())
    quad = probe.T @ cfg.log(diag)                       # <v_i| log diag |v_i>
    b_k = float(-(lam[:k] * quad[:k]).sum())
    return a_k - b_k


def c2_measure(rho) -> float:
    """Tsallis-2 coherence: Tr rho^2 - sum_i rho_ii^2, the squared
    Frobenius weight of the off-diagonal part."""
    m = np.asarray(rho, dtype=complex)
    diag = np.real(np.diagonal(m))
    return float(np.vdot(m, m).real - (diag * diag).sum())


def measure_value(measure, rho, cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """Evaluate a coherence measure named by a MeasureId (or tag string)."""
    mid = measure if isinstance(measure, MeasureId) else MeasureId(measure)
    if mid.tag == "c_r":
        return c_rel_ent(rho, cfg)
    if mid.tag == "c_l1":
        return c_l1(rho)
    if mid.tag == "c2":
        return c2_measure(rho)
    if mid.tag == "c_cross":
        return c_cross(rho, cfg)
    if mid.tag == "c_r_partial":
        return c_rel_partial(rho, mid.k, cfg)
    return c_cross_partial(rho, mid.k, cfg)
