import numpy as np
import pytest

from nonrecip.linalg import (
    PositivityError,
    SymmetryError,
    hermitian_eig,
    hermitianize,
    hermiticity_defect,
    kron,
    psd_sqrt,
)

rng = np.random.default_rng(1234)


def random_hermitian(n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


def test_eig_diagonal():
    w, v = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [1.0, 2.0, 3.0])


def test_eig_pauli_x():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    w, _ = hermitian_eig(sx)
    assert np.allclose(w, [-1.0, 1.0])


def test_eig_reconstruction_and_orthonormality():
    for n in (2, 5, 16):
        m = random_hermitian(n)
        w, v = hermitian_eig(m)
        assert np.all(np.diff(w) >= -1e-14)
        assert np.max(np.abs(m @ v - v @ np.diag(w))) < 1e-10
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-10
        assert np.max(np.abs(w.imag)) == 0.0  # eigh returns real


def test_eig_rejects_non_hermitian():
    m = random_hermitian(4)
    m[0, 1] += 1e-6
    with pytest.raises(SymmetryError):
        hermitian_eig(m)


def test_psd_sqrt_squares_back():
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    s = psd_sqrt(rho)
    assert hermiticity_defect(s) < 1e-12
    assert np.max(np.abs(s @ s - rho)) < 1e-10


def test_psd_sqrt_clamps_small_negatives():
    w = np.array([1.0, 0.5, -5e-11])
    v = np.linalg.qr(random_hermitian(3))[0]
    rho = (v * w) @ v.conj().T
    s = psd_sqrt(hermitianize(rho))
    assert np.min(np.linalg.eigvalsh(s)) >= 0.0


def test_psd_sqrt_rejects_negative():
    with pytest.raises(PositivityError):
        psd_sqrt(np.diag([1.0, -1e-3]))


def test_kron_matches_index_arithmetic():
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(3, 3))
    k = kron(a, b)
    for i in range(2):
        for j in range(2):
            assert np.allclose(k[3 * i:3 * i + 3, 3 * j:3 * j + 3], a[i, j] * b)


def test_kron_rejects_empty():
    with pytest.raises(ValueError):
        kron(np.zeros((0, 0)), np.eye(2))
