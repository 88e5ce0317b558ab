"""Dense complex linear algebra for small Hilbert spaces (dim <= 64).

Thin wrappers around numpy that enforce the Hermiticity / positivity
contracts the rest of the package relies on.
"""
from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = 1e-10


class SymmetryError(ValueError):
    """Matrix violates a required Hermitian symmetry."""


class PositivityError(ValueError):
    """Matrix has an eigenvalue below the allowed negative tolerance."""


def hermiticity_defect(m: np.ndarray) -> float:
    """max |M - M^dagger| over all entries."""
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitianize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, left factor outer (standard ordering)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size == 0 or b.size == 0:
        raise ValueError("kron requires non-empty factors")
    return np.kron(a, b)


def hermitian_eig(m: np.ndarray, tol: float = HERMITICITY_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector columns). Rejects inputs
    whose Hermiticity defect exceeds `tol`.
    """
    m = np.asarray(m, dtype=complex)
    defect = hermiticity_defect(m)
    if defect >= tol:
        raise SymmetryError(f"matrix is not Hermitian (defect {defect:.3e} >= {tol:.1e})")
    w, v = np.linalg.eigh(m)
    return w, v


def psd_sqrt(rho: np.ndarray, tol: float = POSITIVITY_TOL) -> np.ndarray:
    """Hermitian square root of a positive-semidefinite matrix.

    Eigenvalues in (-tol, 0) from roundoff are clamped to zero; anything
    below -tol raises PositivityError.
    """
    w, v = hermitian_eig(rho)
    if w.min() < -tol:
        raise PositivityError(f"eigenvalue {w.min():.3e} below -{tol:.1e}")
    w = np.clip(w, 0.0, None)
    s = (v * np.sqrt(w)) @ v.conj().T
    return hermitianize(s)
