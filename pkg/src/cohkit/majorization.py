"""Majorization predicates, Schur-Horn reports, and Gil index comparisons."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import eigh, validate_spectrum

__all__ = [
    "LengthMismatchError",
    "DimensionTooSmallError",
    "MajorizationReport",
    "GilReport",
    "majorizes",
    "schur_horn_report",
    "gil_indices",
    "gil_report",
]

GIL_VERDICTS = ("forward_holds", "reverse_holds", "mixed")


class LengthMismatchError(ValueError):
    pass


class DimensionTooSmallError(ValueError):
    pass


def majorizes(p, q, mode: str = "strong", tol: float = 1e-10) -> bool:
    """True when p majorizes q: all descending partial sums of p dominate
    those of q within tol.  Strong mode additionally requires equal totals;
    weak mode drops that."""
    if mode not in ("strong", "weak"):
        raise ValueError("mode must be 'strong' or 'weak'")
    pv = np.asarray(p, dtype=float)
    qv = np.asarray(q, dtype=float)
    if pv.ndim != 1 or pv.shape != qv.shape:
        raise LengthMismatchError(f"shapes {pv.shape} and {qv.shape} differ")
    if not (np.all(np.isfinite(pv)) and np.all(np.isfinite(qv))):
        raise ValueError("inputs must be finite")
    psums = np.cumsum(np.sort(pv)[::-1])
    qsums = np.cumsum(np.sort(qv)[::-1])
    if mode == "strong" and abs(psums[-1] - qsums[-1]) > tol:
        return False
    return bool(np.all(psums - qsums >= -tol))


@dataclass(frozen=True)
class MajorizationReport:
    """Schur-Horn margins for one state.

    worst_margin_plain/squared are min_k of the partial-sum gaps
    sum lam^ - sum diag^ (and their squares); k_at_worst is the 1-based
    partial-sum index of the overall worst margin across both tests.
    """

    dim: int
    plain_ok: bool
    squared_ok: bool
    worst_margin_plain: float
    worst_margin_squared: float
    k_at_worst: int


def schur_horn_report(rho, tol: float = 1e-10) -> MajorizationReport:
    """Check spectrum-majorizes-diagonal, plain (strong) and squared (weak)."""
    dec = eigh(rho)
    lam = dec.spectrum
    diag = np.sort(np.real(np.diagonal(np.asarray(rho))))[::-1]
    margins_plain = np.cumsum(lam) - np.cumsum(diag)
    margins_squared = np.cumsum(lam ** 2) - np.cumsum(diag ** 2)
    k_plain = int(np.argmin(margins_plain))
    k_squared = int(np.argmin(margins_squared))
    worst_plain = float(margins_plain[k_plain])
    worst_squared = float(margins_squared[k_squared])
    plain_ok = worst_plain >= -tol and abs(margins_plain[-1]) <= tol
    squared_ok = worst_squared >= -tol
    k_at_worst = k_plain + 1 if worst_plain <= worst_squared else k_squared + 1
    return MajorizationReport(
        dim=lam.size,
        plain_ok=bool(plain_ok),
        squared_ok=bool(squared_ok),
        worst_margin_plain=worst_plain,
        worst_margin_squared=worst_squared,
        k_at_worst=k_at_worst,
    )


def gil_indices(spectrum) -> np.ndarray:
    """Polarimetric-purity indices G_j = sum_{i<d} lam_i - j lam_min for
    j = 1..d-1, evaluated literally; out-of-[0,1] values are reported as-is."""
    lam = validate_spectrum(spectrum)
    d = lam.size
    if d < 2:
        raise DimensionTooSmallError("Gil indices need dimension >= 2")
    head = float(lam[:-1].sum())
    return head - np.arange(1, d) * float(lam[-1])


@dataclass(frozen=True)
class GilReport:
    """Empirical direction of the Gil-index partial-sum comparison.

    partial_sum_gaps[k-1] = sum of the k largest diagonal-side indices minus
    the spectrum side; the verdict reports which inequality direction the
    gaps support (ties count as holding)."""

    dim: int
    spectrum_indices: np.ndarray
    diagonal_indices: np.ndarray
    partial_sum_gaps: np.ndarray
    verdict: str


def gil_report(rho, tol: float = 1e-10) -> GilReport:
    m = np.asarray(rho, dtype=complex)
    if m.shape[0] < 2:
        raise DimensionTooSmallError("Gil report needs dimension >= 2")
    g_spec = gil_indices(eigh(m).spectrum)
    diag = validate_spectrum(np.sort(np.real(np.diagonal(m)))[::-1])
    g_diag = gil_indices(diag)
    gaps = np.cumsum(np.sort(g_diag)[::-1]) - np.cumsum(np.sort(g_spec)[::-1])
    if np.all(gaps >= -tol):
        verdict = "forward_holds"
    elif np.all(gaps <= tol):
        verdict = "reverse_holds"
    else:
        verdict = "mixed"
    return GilReport(
        dim=m.shape[0],
        spectrum_indices=g_spec,
        diagonal_indices=g_diag,
        partial_sum_gaps=gaps,
        verdict=verdict,
    )
