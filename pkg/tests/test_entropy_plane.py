import math

import numpy as np
import pytest

from cohkit.entropy_plane import (CurveFamily, FamilyInvalidForDimError,
                                  OutOfRangeError, TooFewBasesError,
                                  basis_from_json, boundary_samples,
                                  computational_basis, containment_polylines,
                                  entropy_lambda_gap, eur_curve_point,
                                  family_spectrum, fourier_basis, haar_basis,
                                  measurement_probs, plane_point,
                                  polyline_bounds, refined_eur_report,
                                  valid_families)
from cohkit.linalg import DimMismatchError, save_matrix_json
from cohkit.measures import EntropyConfig
from cohkit.random_states import SeedStream, random_density

RHO_Q = np.array([[0.5, 0.25], [0.25, 0.5]])
GAP_Q = 0.5612781244591329  # frozen 50-digit evaluation of H(3/4,1/4) - 1/4


def test_family_validation():
    assert [f.tag for f in valid_families(4)] == list(
        ("qubit_lower", "lower_intermediate", "lower_upper",
         "middle_intermediate", "upper_degenerate"))
    assert len(valid_families(3)) == 3
    assert len(valid_families(2)) == 3
    with pytest.raises(FamilyInvalidForDimError):
        CurveFamily("lower_intermediate", 3)
    with pytest.raises(FamilyInvalidForDimError):
        CurveFamily("qubit_lower", 1)
    with pytest.raises(FamilyInvalidForDimError):
        CurveFamily("sideways", 4)


def test_family_spectrum_endpoints():
    upper = CurveFamily("upper_degenerate", 4)
    np.testing.assert_allclose(family_spectrum(upper, 1.0), [1, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(family_spectrum(upper, 0.0), [0.25] * 4, atol=1e-15)
    qubit = CurveFamily("qubit_lower", 4)
    np.testing.assert_allclose(family_spectrum(qubit, 0.0), [0.5, 0.5, 0, 0], atol=1e-15)
    with pytest.raises(OutOfRangeError):
        family_spectrum(qubit, 1.5)


def test_family_spectra_are_valid_everywhere():
    for d in (2, 3, 4, 5, 6, 7, 8):
        for family in valid_families(d):
            for t in np.linspace(0, 1, 41):
                lam = family_spectrum(family, float(t))
                assert lam.shape == (d,)
                assert np.all(np.diff(lam) <= 1e-12)
                assert lam.min() >= 0.0
                assert abs(lam.sum() - 1.0) <= 1e-9


def test_family_constraint_structure():
    d = 5
    lam = family_spectrum(CurveFamily("lower_intermediate", d), 0.4)
    m = d - 3
    assert np.allclose(lam[:m + 1], lam[0])
    assert lam[m + 1] <= lam[0] and np.allclose(lam[m + 2:], 0.0)
    lam = family_spectrum(CurveFamily("middle_intermediate", d), 0.4)
    n = d - 3
    assert np.allclose(lam[1:n + 2], lam[1]) and lam[0] >= lam[1]
    lam = family_spectrum(CurveFamily("lower_upper", d), 0.3)
    assert np.allclose(lam[:d - 1], lam[0]) and lam[d - 1] <= lam[0]


def test_plane_point_examples():
    assert plane_point([1.0, 0, 0, 0]) == (0.0, 0.0)
    s2, svn = plane_point([0.25] * 4)
    assert abs(s2 - 0.75) < 1e-12 and abs(svn - 2.0) < 1e-12
    s2, svn = plane_point([0.75, 0.25, 0, 0])
    assert abs(s2 - 0.375) < 1e-12
    assert abs(svn - 0.8112781244591328) < 1e-12


def test_boundary_samples_hits_endpoints():
    for d in (2, 4, 6):
        for family in valid_families(d):
            samples = boundary_samples(family, 33)
            assert len(samples) == 33
            t0, first = samples[0]
            t1, last = samples[-1]
            assert t0 == 0.0 and t1 == 1.0
            np.testing.assert_allclose(
                first, plane_point(family_spectrum(family, 0.0)), atol=1e-12)
            np.testing.assert_allclose(
                last, plane_point(family_spectrum(family, 1.0)), atol=1e-12)
    qubit = CurveFamily("qubit_lower", 4)
    assert all(point[1] <= 1.0 + 1e-12 for _, point in boundary_samples(qubit, 65))
    with pytest.raises(ValueError):
        boundary_samples(qubit, 1)


def test_eur_curve_point_examples():
    assert eur_curve_point(4, 1.0) == (0.0, 0.0)
    x, y = eur_curve_point(4, 0.25)
    assert abs(x - 2.0) < 1e-12 and abs(y - 0.75) < 1e-12
    x, y = eur_curve_point(4, 0.5)
    assert abs(x - 1.7924812503605781) < 1e-12 and y == 0.5
    # cross-check against the plane evaluation of (1/2, 1/6, 1/6, 1/6)
    _, svn = plane_point([0.5, 1 / 6, 1 / 6, 1 / 6])
    assert abs(x - svn) < 1e-12
    with pytest.raises(OutOfRangeError):
        eur_curve_point(4, 0.1)


def test_eur_curve_point_nats():
    cfg = EntropyConfig(log_base=math.e)
    x, _ = eur_curve_point(3, 1 / 3, cfg)
    assert abs(x - math.log(3)) < 1e-12


def test_entropy_lambda_gap_examples():
    assert abs(entropy_lambda_gap(np.diag([1.0, 0.0]))) <= 1e-12
    assert abs(entropy_lambda_gap(np.eye(4) / 4) - 1.25) < 1e-12
    assert abs(entropy_lambda_gap(RHO_Q) - GAP_Q) < 1e-12


def test_builtin_bases():
    for d in (2, 3, 5):
        for basis in (computational_basis(d), fourier_basis(d),
                      haar_basis(d, SeedStream(3))):
            gram = basis.vectors.conj().T @ basis.vectors
            assert np.abs(gram - np.eye(d)).max() <= 1e-8
    hadamard = fourier_basis(2).vectors
    np.testing.assert_allclose(np.abs(hadamard), np.full((2, 2), 1 / np.sqrt(2)),
                               atol=1e-12)


def test_basis_from_json(tmp_path):
    path = tmp_path / "basis.json"
    save_matrix_json(path, fourier_basis(3).vectors)
    basis = basis_from_json(path, label="f3")
    assert basis.label == "f3" and basis.dim == 3
    save_matrix_json(path, np.ones((2, 2)))
    with pytest.raises(ValueError):
        basis_from_json(path)


def test_measurement_probs_examples():
    rho = random_density(4, 4, "ginibre", SeedStream(5))
    np.testing.assert_allclose(measurement_probs(rho, computational_basis(4)),
                               np.real(np.diagonal(rho)), atol=1e-12)
    probs = measurement_probs(np.eye(3) / 3, fourier_basis(3))
    np.testing.assert_allclose(probs, np.full(3, 1 / 3), atol=1e-12)
    plus = np.full((2, 2), 0.5)
    probs = measurement_probs(plus, fourier_basis(2))
    np.testing.assert_allclose(sorted(probs), [0.0, 1.0], atol=1e-12)
    with pytest.raises(DimMismatchError):
        measurement_probs(np.eye(2) / 2, computational_basis(3))


def test_refined_eur_maximally_mixed_qubit():
    report = refined_eur_report(np.eye(2) / 2,
                                [computational_basis(2), fourier_basis(2)])
    assert abs(report.lhs - 2.0) < 1e-12
    assert abs(report.refined_rhs - 1.0) < 1e-12
    assert abs(report.mu_rhs - 1.0) < 1e-12
    assert report.holds and not report.refined_tighter


def test_refined_eur_ground_state():
    rho = np.diag([1.0, 0.0])
    report = refined_eur_report(rho, [computational_basis(2), fourier_basis(2)])
    assert abs(report.lhs - 1.0) < 1e-12
    assert abs(report.refined_rhs - 0.5) < 1e-12
    assert abs(report.mu_rhs - 1.0) < 1e-12
    assert report.holds and not report.refined_tighter


def test_refined_eur_duplicate_basis():
    rho = np.eye(2) / 2
    basis = computational_basis(2)
    report = refined_eur_report(rho, [basis, basis])
    assert abs(report.mu_rhs) <= 1e-12
    assert abs(report.refined_rhs - 1.0) < 1e-12
    assert report.refined_tighter  # degenerate bases make MU vacuous


def test_refined_eur_many_bases_and_root():
    rho = random_density(3, 3, "ginibre", SeedStream(9))
    bases = [computational_basis(3), fourier_basis(3), haar_basis(3, SeedStream(10))]
    report = refined_eur_report(rho, bases, root_order=2)
    assert report.mu_rhs is None and report.refined_tighter is None
    assert report.holds
    assert report.refined_rhs_root >= report.refined_rhs - 1e-12
    plain = refined_eur_report(rho, bases)
    assert abs(plain.refined_rhs_root - plain.refined_rhs) < 1e-12
    with pytest.raises(TooFewBasesError):
        refined_eur_report(rho, [computational_basis(3)])


def test_refined_eur_holds_on_random_draws():
    rng = SeedStream(13).generator()
    for _ in range(300):
        d = int(rng.integers(2, 7))
        rho = random_density(d, int(rng.integers(1, d + 1)), "ginibre", rng)
        report = refined_eur_report(rho, [haar_basis(d, rng, "a"),
                                          haar_basis(d, rng, "b")])
        assert report.holds


def test_eur_curve_monotone_convex():
    for d in (2, 4, 8):
        a = np.linspace(1.0, 1.0 / d, 1000)
        pts = np.array([eur_curve_point(d, float(v)) for v in a])
        dx = np.diff(pts[:, 0])
        assert np.all(dx > 0)
        slopes = np.diff(pts[:, 1]) / dx
        assert np.all(np.diff(slopes) >= -1e-9)


def test_containment_polylines_bound_family_points():
    for d in (3, 5):
        lower, upper = containment_polylines(d)
        assert lower.shape[1] == 2 and upper.shape[1] == 2
        assert np.all(np.diff(lower[:, 0]) > 0)
        assert np.all(np.diff(upper[:, 0]) > 0)
        # the polylines reproduce their own generating curves
        for t in np.linspace(0, 1, 17):
            s2, svn = plane_point(family_spectrum(CurveFamily("qubit_lower", d), float(t)))
            bound = polyline_bounds(s2, lower)
            assert bound is not None and abs(bound - svn) < 1e-5
            s2, svn = plane_point(family_spectrum(CurveFamily("upper_degenerate", d), float(t)))
            bound = polyline_bounds(s2, upper)
            assert bound is not None and abs(bound - svn) < 1e-5
        assert polyline_bounds(0.9, lower) is None  # beyond the qubit range


def test_random_spectra_sit_between_boundaries():
    rng = SeedStream(17).generator()
    for d in (3, 4):
        lower, upper = containment_polylines(d)
        for _ in range(2000):
            draws = rng.standard_exponential(d)
            s2, svn = plane_point(np.sort(draws / draws.sum())[::-1])
            top = polyline_bounds(s2, upper)
            assert top is not None and svn <= top + 1e-6
            bottom = polyline_bounds(s2, lower)
            if bottom is not None:
                assert svn >= bottom - 1e-6
