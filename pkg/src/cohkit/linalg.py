"""Dense complex Hermitian primitives: density-matrix validation, spectra,
dephasing, and the shared JSON matrix format."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "MatrixValidationError",
    "NotSquareError",
    "NotHermitianError",
    "NotPSDError",
    "TraceZeroError",
    "InvalidSpectrumError",
    "ConvergenceFailureError",
    "DimMismatchError",
    "EigenDecomposition",
    "validate_density",
    "validate_spectrum",
    "eigh",
    "dephase",
    "offdiag_max",
    "load_matrix_json",
    "save_matrix_json",
]

DEFAULT_TOL = 1e-10


class MatrixValidationError(ValueError):
    """A matrix failed density-matrix validation."""


class NotSquareError(MatrixValidationError):
    pass


class NotHermitianError(MatrixValidationError):
    pass


class NotPSDError(MatrixValidationError):
    pass


class TraceZeroError(MatrixValidationError):
    pass


class InvalidSpectrumError(ValueError):
    """A vector is not a valid descending probability spectrum."""


class ConvergenceFailureError(RuntimeError):
    """The eigensolver did not converge; the input is pathological."""


class DimMismatchError(ValueError):
    """Operands have incompatible dimensions."""


def validate_density(matrix, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a candidate density matrix and return its canonical form.

    The input is symmetrized to (M + M†)/2; negative eigenvalues within
    ``tol`` are clipped to zero and the trace is renormalized to one.
    Inputs further than ``tol`` from a valid state raise:

    NotSquareError, NotHermitianError (entrywise asymmetry beyond tol),
    NotPSDError (an eigenvalue below -tol), TraceZeroError (trace too
    small to renormalize).
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise MatrixValidationError("matrix has non-finite entries")
    asym = float(np.abs(m - m.conj().T).max())
    if asym > tol:
        raise NotHermitianError(f"Hermiticity defect {asym:.3e} exceeds {tol:.1e}")
    h = 0.5 * (m + m.conj().T)
    vals = np.linalg.eigvalsh(h)
    lam_min = float(vals[0])
    if lam_min < -tol:
        raise NotPSDError(f"minimum eigenvalue {lam_min:.3e} below -{tol:.1e}")
    if lam_min < 0.0:
        lam, vecs = np.linalg.eigh(h)
        lam = np.clip(lam, 0.0, None)
        total = float(lam.sum())
        if total <= tol:
            raise TraceZeroError("trace vanishes after clipping")
        h = (vecs * (lam / total)) @ vecs.conj().T
        return 0.5 * (h + h.conj().T)
    trace = float(np.trace(h).real)
    if abs(trace) <= tol:
        raise TraceZeroError(f"trace {trace:.3e} is numerically zero")
    if abs(trace - 1.0) > 1e-15:
        h = h / trace
    return h


def validate_spectrum(values, tol: float = 1e-9,
                      clamp_tol: float = DEFAULT_TOL) -> np.ndarray:
    """Canonicalize a descending probability vector.

    Entries in [-clamp_tol, 0) clamp to zero and the vector is renormalized
    to unit sum; worse inputs raise InvalidSpectrumError.
    """
    lam = np.asarray(values, dtype=float).copy()
    if lam.ndim != 1 or lam.size == 0:
        raise InvalidSpectrumError("spectrum must be a non-empty 1-d vector")
    if not np.all(np.isfinite(lam)):
        raise InvalidSpectrumError("spectrum has non-finite entries")
    if lam.min() < -clamp_tol:
        raise InvalidSpectrumError(f"negative eigenvalue {lam.min():.3e}")
    if lam.max() > 1.0 + clamp_tol:
        raise InvalidSpectrumError(f"eigenvalue {lam.max():.3e} above one")
    if np.any(np.diff(lam) > clamp_tol):
        raise InvalidSpectrumError("spectrum is not in descending order")
    np.clip(lam, 0.0, None, out=lam)
    total = float(lam.sum())
    if abs(total - 1.0) > tol:
        raise InvalidSpectrumError(f"spectrum sums to {total!r}")
    if total != 1.0:
        lam = lam / total
    return lam


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectrum in descending order with matching eigenvector columns."""

    spectrum: np.ndarray
    eigenvectors: np.ndarray


def eigh(rho) -> EigenDecomposition:
    """Eigendecomposition of a density matrix.

    The spectrum comes back descending, clamped to [0, 1] and renormalized
    to unit sum; eigenvector column i pairs with spectrum[i].  Deterministic
    for a given input.
    """
    m = np.asarray(rho, dtype=complex)
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - pathological
        raise ConvergenceFailureError(str(exc)) from exc
    spectrum = validate_spectrum(vals[::-1])
    return EigenDecomposition(spectrum=spectrum, eigenvectors=vecs[:, ::-1])


def dephase(rho) -> np.ndarray:
    """Zero all off-diagonal entries, keeping the diagonal exactly."""
    m = np.asarray(rho, dtype=complex)
    return np.diag(np.diagonal(m).copy())


def offdiag_max(rho) -> float:
    """Largest off-diagonal magnitude; zero iff the state is incoherent."""
    m = np.asarray(rho, dtype=complex)
    off = m - np.diag(np.diagonal(m))
    return float(np.abs(off).max()) if m.shape[0] > 1 else 0.0


def save_matrix_json(path, matrix) -> None:
    """Write a complex matrix as {"dim": d, "re": [[...]], "im": [[...]]}."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {m.shape}")
    payload = {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_matrix_json(path) -> np.ndarray:
    """Read a complex matrix written by :func:`save_matrix_json`."""
    with open(path) as fh:
        payload = json.load(fh)
    dim = int(payload["dim"])
    re = np.asarray(payload["re"], dtype=float)
    im = np.asarray(payload["im"], dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise MatrixValidationError("matrix file entries do not match dim")
    return re + 1j * im
