import numpy as np
import pytest

from cohkit.linalg import (InvalidSpectrumError, NotHermitianError,
                           NotPSDError, NotSquareError, TraceZeroError,
                           dephase, eigh, load_matrix_json, offdiag_max,
                           save_matrix_json, validate_density,
                           validate_spectrum)
from cohkit.random_states import haar_unitary, random_density


def test_validate_accepts_maximally_mixed():
    rho = validate_density(np.eye(2) / 2)
    np.testing.assert_allclose(rho, np.eye(2) / 2)


def test_validate_accepts_plus_projector():
    rho = validate_density([[0.5, 0.5], [0.5, 0.5]])
    np.testing.assert_allclose(rho, 0.5 * np.ones((2, 2)), atol=1e-14)


def test_validate_rejects_negative_eigenvalue():
    with pytest.raises(NotPSDError):
        validate_density([[1.0, 0.0], [0.0, -0.2]])


def test_validate_rejects_non_square():
    with pytest.raises(NotSquareError):
        validate_density(np.ones((2, 3)))


def test_validate_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        validate_density([[0.5, 0.3], [0.1, 0.5]])


def test_validate_rejects_zero_trace():
    with pytest.raises(TraceZeroError):
        validate_density(np.zeros((3, 3)))


def test_validate_symmetrizes_within_tolerance():
    rho = np.eye(2) / 2 + np.array([[0, 1e-12], [-1e-12, 0]])
    out = validate_density(rho)
    assert np.abs(out - out.conj().T).max() == 0.0


def test_validate_clips_and_renormalizes():
    rho = np.diag([1.0 + 5e-11, -5e-11])
    out = validate_density(rho)
    lam = np.linalg.eigvalsh(out)
    assert lam.min() >= 0.0
    assert abs(np.trace(out).real - 1.0) <= 1e-12


def test_validate_renormalizes_trace():
    out = validate_density(np.eye(4) / 2, tol=1e-8)
    np.testing.assert_allclose(out, np.eye(4) / 4)


def test_eigh_diagonal_input():
    dec = eigh(np.diag([0.2, 0.8]))
    np.testing.assert_allclose(dec.spectrum, [0.8, 0.2])
    perm = np.abs(dec.eigenvectors)
    np.testing.assert_allclose(perm, [[0, 1], [1, 0]], atol=1e-12)


def test_eigh_closed_form_2x2():
    # trace/2 +- |offdiag| for a real symmetric qubit state
    dec = eigh([[0.5, 0.25], [0.25, 0.5]])
    np.testing.assert_allclose(dec.spectrum, [0.75, 0.25], atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_eigh_maximally_mixed(d):
    dec = eigh(np.eye(d) / d)
    np.testing.assert_allclose(dec.spectrum, np.full(d, 1.0 / d), atol=1e-12)


def test_eigh_contracts_on_random_states():
    rng = np.random.default_rng(7)
    for _ in range(10000):
        d = int(rng.integers(2, 9))
        rank = int(rng.integers(1, d + 1))
        rho = random_density(d, rank, "ginibre" if rng.integers(2) else "spectrum-haar", rng)
        dec = eigh(rho)
        assert np.all(np.diff(dec.spectrum) <= 1e-12)
        assert dec.spectrum.min() >= 0.0
        assert abs(dec.spectrum.sum() - 1.0) <= 1e-9
        v = dec.eigenvectors
        assert np.abs(v.conj().T @ v - np.eye(d)).max() <= 1e-9
        rebuilt = (v * dec.spectrum) @ v.conj().T
        assert np.abs(rebuilt - rho).max() <= 1e-9


def test_eigh_spectrum_unitary_invariance():
    rng = np.random.default_rng(11)
    for _ in range(50):
        d = int(rng.integers(2, 7))
        rho = random_density(d, d, "ginibre", rng)
        u = haar_unitary(d, rng)
        rotated = u @ rho @ u.conj().T
        np.testing.assert_allclose(eigh(rotated).spectrum, eigh(rho).spectrum,
                                   atol=1e-8)


def test_dephase_examples():
    np.testing.assert_allclose(dephase([[0.5, 0.5], [0.5, 0.5]]),
                               np.diag([0.5, 0.5]))
    rho = np.array([[0.6, 0.1j], [-0.1j, 0.4]])
    np.testing.assert_allclose(dephase(rho), np.diag([0.6, 0.4]))


def test_dephase_idempotent_and_trace_preserving():
    rng = np.random.default_rng(3)
    for _ in range(100):
        d = int(rng.integers(2, 7))
        rho = random_density(d, d, "ginibre", rng)
        deph = dephase(rho)
        np.testing.assert_array_equal(dephase(deph), deph)
        assert abs(np.trace(deph).real - 1.0) <= 1e-10
        assert offdiag_max(deph) == 0.0


def test_validate_spectrum_clamps_and_rejects():
    lam = validate_spectrum([0.7, 0.3 + 1e-12, -1e-12])
    assert lam.min() == 0.0
    assert abs(lam.sum() - 1.0) < 1e-15
    with pytest.raises(InvalidSpectrumError):
        validate_spectrum([0.3, 0.7])  # ascending
    with pytest.raises(InvalidSpectrumError):
        validate_spectrum([0.9, -0.1])
    with pytest.raises(InvalidSpectrumError):
        validate_spectrum([0.6, 0.3])  # sums to 0.9


def test_matrix_json_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    path = tmp_path / "m.json"
    save_matrix_json(path, m)
    np.testing.assert_array_equal(load_matrix_json(path), m)
