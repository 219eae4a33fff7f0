"""Eigenvalue-constraint curve families in the (S2, SvN) plane, boundary
polylines, measurement bases, and the refined max-eigenvalue entropic
uncertainty bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DimMismatchError, eigh, load_matrix_json, validate_spectrum
from .measures import DEFAULT_CONFIG, EntropyConfig, shannon_entropy, tsallis2

__all__ = [
    "FAMILY_TAGS",
    "FamilyInvalidForDimError",
    "OutOfRangeError",
    "TooFewBasesError",
    "CurveFamily",
    "MeasurementBasis",
    "EurReport",
    "valid_families",
    "family_spectrum",
    "plane_point",
    "boundary_samples",
    "eur_curve_point",
    "entropy_lambda_gap",
    "computational_basis",
    "fourier_basis",
    "haar_basis",
    "basis_from_json",
    "measurement_probs",
    "refined_eur_report",
    "containment_polylines",
    "polyline_bounds",
]

FAMILY_TAGS = ("qubit_lower", "lower_intermediate", "lower_upper",
               "middle_intermediate", "upper_degenerate")


class FamilyInvalidForDimError(ValueError):
    pass


class OutOfRangeError(ValueError):
    pass


class TooFewBasesError(ValueError):
    pass


@dataclass(frozen=True)
class CurveFamily:
    """One of the five eigenvalue-constraint families; the intermediate
    families fix m = n = dim - 3 and need dim >= 4."""

    tag: str
    dim: int

    def __post_init__(self):
        if self.tag not in FAMILY_TAGS:
            raise FamilyInvalidForDimError(f"unknown family {self.tag!r}")
        minimum = 4 if self.tag in ("lower_intermediate", "middle_intermediate") else 2
        if self.dim < minimum:
            raise FamilyInvalidForDimError(f"{self.tag} needs dim >= {minimum}")


def valid_families(d: int):
    """All families defined at dimension d, in canonical order."""
    out = []
    for tag in FAMILY_TAGS:
        try:
            out.append(CurveFamily(tag, d))
        except FamilyInvalidForDimError:
            continue
    return out


def family_spectrum(family: CurveFamily, t: float) -> np.ndarray:
    """One-parameter spectrum of a curve family.

    t = 0 is the most-uniform end of the family and t = 1 the most-peaked;
    the free eigenvalue moves linearly in t.
    """
    if not 0.0 <= t <= 1.0:
        raise OutOfRangeError(f"t={t} outside [0, 1]")
    d = family.dim
    lam = np.zeros(d)
    if family.tag == "qubit_lower":
        top = 0.5 + 0.5 * t
        lam[0] = top
        lam[1] = 1.0 - top
    elif family.tag == "lower_intermediate":
        m = d - 3
        free = (1.0 - t) / (m + 2)
        lam[:m + 1] = (1.0 - free) / (m + 1)
        lam[m + 1] = free
    elif family.tag == "lower_upper":
        free = (1.0 - t) / d
        lam[:d - 1] = (1.0 - free) / (d - 1)
        lam[d - 1] = free
    elif family.tag == "middle_intermediate":
        n = d - 3
        top = 1.0 / (n + 2) + t * (1.0 - 1.0 / (n + 2))
        lam[0] = top
        lam[1:n + 2] = (1.0 - top) / (n + 1)
    else:  # upper_degenerate
        top = 1.0 / d + t * (1.0 - 1.0 / d)
        lam[0] = top
        lam[1:] = (1.0 - top) / (d - 1)
    return validate_spectrum(np.sort(lam)[::-1])


def plane_point(spectrum, cfg: EntropyConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """(S2, SvN) coordinates of a spectrum."""
    lam = validate_spectrum(spectrum)
    return tsallis2(lam), shannon_entropy(lam, cfg)


def boundary_samples(family: CurveFamily, count: int,
                     cfg: EntropyConfig = DEFAULT_CONFIG):
    """count uniformly spaced t values mapped to (t, (s2, svn)), in t order."""
    if count < 2:
        raise ValueError("count must be >= 2")
    out = []
    for t in np.linspace(0.0, 1.0, count):
        out.append((float(t), plane_point(family_spectrum(family, float(t)), cfg)))
    return out


def eur_curve_point(d: int, a: float,
                    cfg: EntropyConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Boundary point (x, y) = (SvN, 1 - lam_max) for the spectrum with top
    eigenvalue a and the remaining weight spread over d - 1 equal entries."""
    if d < 2:
        raise OutOfRangeError("dimension must be >= 2")
    if not (1.0 / d - 1e-12 <= a <= 1.0 + 1e-12):
        raise OutOfRangeError(f"a={a} outside [1/{d}, 1]")
    a = min(max(a, 1.0 / d), 1.0)
    x = 0.0
    if a > cfg.support_epsilon:
        x -= a * float(cfg.log(a))
    rest = 1.0 - a
    if rest > cfg.support_epsilon:
        x -= rest * float(cfg.log(rest / (d - 1)))
    return x, rest


def entropy_lambda_gap(rho, cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """SvN(rho) - (1 - lam_max(rho)); nonnegative for every state."""
    lam = eigh(rho).spectrum
    return shannon_entropy(lam, cfg) - (1.0 - float(lam[0]))


@dataclass(frozen=True)
class MeasurementBasis:
    """d orthonormal measurement vectors as matrix columns."""

    dim: int
    vectors: np.ndarray
    label: str


def _checked_basis(vectors: np.ndarray, label: str, tol: float = 1e-8) -> MeasurementBasis:
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise DimMismatchError("basis must be a square matrix of column vectors")
    gram_defect = float(np.abs(v.conj().T @ v - np.eye(v.shape[0])).max())
    if gram_defect > tol:
        raise ValueError(f"basis Gram defect {gram_defect:.3e} exceeds {tol:.1e}")
    return MeasurementBasis(dim=v.shape[0], vectors=v, label=label)


def computational_basis(d: int) -> MeasurementBasis:
    return _checked_basis(np.eye(d, dtype=complex), "computational")


def fourier_basis(d: int) -> MeasurementBasis:
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    vectors = np.exp(2j * np.pi * j * k / d) / np.sqrt(d)
    return _checked_basis(vectors, "fourier")


def haar_basis(d: int, source, label: str = "haar") -> MeasurementBasis:
    from .random_states import haar_unitary

    return _checked_basis(haar_unitary(d, source), label)


def basis_from_json(path, label: str | None = None) -> MeasurementBasis:
    """Load basis columns from the shared JSON matrix format."""
    vectors = load_matrix_json(path)
    return _checked_basis(vectors, label or str(path))


def measurement_probs(rho, basis: MeasurementBasis) -> np.ndarray:
    """Outcome probabilities p_i = <b_i| rho |b_i>."""
    m = np.asarray(rho, dtype=complex)
    if m.shape != (basis.dim, basis.dim):
        raise DimMismatchError(f"state shape {m.shape} vs basis dim {basis.dim}")
    probs = np.real(np.einsum("ji,jk,ki->i", basis.vectors.conj(), m, basis.vectors))
    return np.clip(probs, 0.0, None)


@dataclass(frozen=True)
class EurReport:
    """Entropic-uncertainty audit of one state against N >= 2 bases.

    lhs = sum of measured Shannon entropies; refined_rhs = N - sum of the
    per-basis maximal probabilities; mu_rhs = -2 log max-overlap (present
    only for exactly two bases).  refined_rhs_root generalizes refined_rhs
    to sum (1 - lam_max)^(1/root_order), reported without any validity
    assertion.
    """

    basis_labels: tuple
    entropies: tuple
    max_probs: tuple
    lhs: float
    refined_rhs: float
    mu_rhs: float | None
    holds: bool
    refined_tighter: bool | None
    refined_rhs_root: float
    root_order: int


def refined_eur_report(rho, bases, cfg: EntropyConfig = DEFAULT_CONFIG,
                       root_order: int = 1) -> EurReport:
    """State-dependent uncertainty bound sum H_j >= N - sum lam_max^j, with
    the two-basis overlap bound for comparison."""
    bases = list(bases)
    if len(bases) < 2:
        raise TooFewBasesError("need at least two measurement bases")
    if root_order < 1:
        raise ValueError("root_order must be >= 1")
    entropies = []
    max_probs = []
    for basis in bases:
        probs = measurement_probs(rho, basis)
        entropies.append(shannon_entropy(probs, cfg))
        max_probs.append(float(probs.max()))
    lhs = float(sum(entropies))
    refined_rhs = float(len(bases) - sum(max_probs))
    mu_rhs = None
    refined_tighter = None
    if len(bases) == 2:
        overlap = float(np.abs(bases[0].vectors.conj().T @ bases[1].vectors).max())
        mu_rhs = float(-2.0 * cfg.log(min(overlap, 1.0)))
        refined_tighter = bool(refined_rhs > mu_rhs)
    root_terms = [(1.0 - p) ** (1.0 / root_order) for p in max_probs]
    return EurReport(
        basis_labels=tuple(b.label for b in bases),
        entropies=tuple(entropies),
        max_probs=tuple(max_probs),
        lhs=lhs,
        refined_rhs=refined_rhs,
        mu_rhs=mu_rhs,
        holds=bool(lhs >= refined_rhs - 1e-9),
        refined_tighter=refined_tighter,
        refined_rhs_root=float(sum(root_terms)),
        root_order=int(root_order),
    )


def _two_value_curve(d: int, top: np.ndarray, spread: int,
                     cfg: EntropyConfig) -> np.ndarray:
    """Vectorized (s2, svn) for spectra (top, rest/spread, ..., 0); spread is
    the number of equal non-top entries."""
    rest = 1.0 - top
    s2 = 1.0 - top ** 2 - rest ** 2 / spread
    svn = np.zeros_like(top)
    mask = top > cfg.support_epsilon
    svn[mask] -= top[mask] * cfg.log(top[mask])
    mask = rest > cfg.support_epsilon
    svn[mask] -= rest[mask] * cfg.log(rest[mask] / spread)
    return np.column_stack([s2 + 0.0, np.maximum(svn, 0.0) + 0.0])


def _adaptive_polyline(curve: np.ndarray, samples: int) -> np.ndarray:
    """Pick `samples` nodes from a dense curve by equidistributing the
    integrated root curvature of svn(s2), keeping interpolation sag near the
    512-node optimum."""
    order = np.argsort(curve[:, 0])
    x = curve[order, 0]
    y = curve[order, 1]
    keep = np.concatenate([[True], np.diff(x) > 1e-15])
    x, y = x[keep], y[keep]
    slopes = np.diff(y) / np.diff(x)
    xm = 0.5 * (x[:-1] + x[1:])
    seg = np.diff(xm)
    good = seg > 1e-15
    weight = np.sqrt(np.abs(np.diff(slopes))[good] / seg[good])
    cumulative = np.concatenate([[0.0], np.cumsum(weight * seg[good])])
    grid = np.concatenate([[xm[0]], xm[1:][good]])
    targets = np.linspace(0.0, cumulative[-1], samples)
    node_x = np.interp(targets, cumulative, grid)
    idx = np.unique(np.searchsorted(x, node_x).clip(0, x.size - 1))
    idx = np.unique(np.concatenate([idx, [0, x.size - 1]]))
    return np.column_stack([x[idx], y[idx]])


def containment_polylines(d: int, samples: int = 512,
                          cfg: EntropyConfig = DEFAULT_CONFIG):
    """(lower, upper) boundary polylines for the containment check, each an
    (n, 2) array of (s2, svn) sorted by s2.

    lower is the qubit two-eigenvalue curve, upper the one-large-rest-equal
    degenerate curve; nodes are placed adaptively so chord sag stays within
    the interpolation slack.
    """
    if d < 2:
        raise OutOfRangeError("dimension must be >= 2")
    dense = np.unique(np.concatenate([
        np.linspace(0.0, 1.0, 150001),
        np.geomspace(1e-13, 1.0, 30000),
        1.0 - np.geomspace(1e-13, 0.999999, 30000),
    ]))
    top_lower = 0.5 + 0.5 * dense
    lower_curve = _two_value_curve(d, top_lower, 1, cfg)
    top_upper = 1.0 / d + dense * (1.0 - 1.0 / d)
    upper_curve = _two_value_curve(d, top_upper, d - 1, cfg)
    return (_adaptive_polyline(lower_curve, samples),
            _adaptive_polyline(upper_curve, samples))


def polyline_bounds(s2: float, polyline: np.ndarray) -> float | None:
    """Interpolated svn of a polyline at s2, or None outside its s2 range."""
    x = polyline[:, 0]
    if s2 < x[0] - 1e-12 or s2 > x[-1] + 1e-12:
        return None
    return float(np.interp(s2, x, polyline[:, 1]))
