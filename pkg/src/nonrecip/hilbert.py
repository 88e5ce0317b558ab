"""Composite Hilbert-space bookkeeping.

Fixed subsystem order everywhere: [qubit L, qubit R, cavity 1, cavity 2].
Qubit local basis: index 0 = ground, 1 = excited. Flattened indices are
row-major over the subsystem order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import kron

QUBIT_L, QUBIT_R, CAVITY_1, CAVITY_2 = 0, 1, 2, 3


class LayoutError(ValueError):
    """Operator or index inconsistent with the space layout."""


@dataclass(frozen=True)
class SpaceLayout:
    """Ordered list of local dimensions of the composite space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        if any(d < 2 for d in self.dims):
            raise LayoutError(f"every local dimension must be >= 2, got {self.dims}")

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    @property
    def n_sites(self) -> int:
        return len(self.dims)


def standard_layout(n_fock: int = 3) -> SpaceLayout:
    """Two qubits plus two cavities truncated at `n_fock` Fock states."""
    return SpaceLayout((2, 2, n_fock, n_fock))


# ---------------------------------------------------------------------------
# local operators
# ---------------------------------------------------------------------------

def destroy(dim: int) -> np.ndarray:
    """Bosonic annihilation operator truncated to `dim` levels."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def number(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


# Qubit ops in the (g, e) = (0, 1) local basis.
SIGMA_MINUS = destroy(2)                      # |g><e|
SIGMA_PLUS = SIGMA_MINUS.conj().T             # |e><g|
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)
SIGMA_X = SIGMA_PLUS + SIGMA_MINUS
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)  # -i|g><e| + i|e><g|


def embed(local_op: np.ndarray, site: int, layout: SpaceLayout) -> np.ndarray:
    """Lift a single-site operator to the full space (identity elsewhere)."""
    local_op = np.asarray(local_op, dtype=complex)
    d = layout.dims[site]
    if local_op.shape != (d, d):
        raise LayoutError(
            f"operator shape {local_op.shape} does not match dimension {d} of site {site}"
        )
    out = np.eye(1, dtype=complex)
    for s, ds in enumerate(layout.dims):
        out = kron(out, local_op if s == site else np.eye(ds, dtype=complex))
    return out


def basis_state(occupations, layout: SpaceLayout) -> np.ndarray:
    """Unit computational basis ket (1-d array of length layout.dim)."""
    if len(occupations) != layout.n_sites:
        raise LayoutError("occupation list length does not match layout")
    idx = 0
    for occ, d in zip(occupations, layout.dims):
        if not 0 <= occ < d:
            raise IndexError(f"occupation {occ} out of range for dimension {d}")
        idx = idx * d + occ
    psi = np.zeros(layout.dim, dtype=complex)
    psi[idx] = 1.0
    return psi


def ket_to_dm(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def partial_trace(rho: np.ndarray, keep_sites, layout: SpaceLayout) -> np.ndarray:
    """Trace out every site not in `keep_sites` (order of kept sites preserved)."""
    keep = list(keep_sites)
    if len(set(keep)) != len(keep) or any(not 0 <= s < layout.n_sites for s in keep):
        raise LayoutError(f"malformed keep list {keep}")
    if sorted(keep) != keep:
        raise LayoutError("keep list must be in ascending site order")
    dims = layout.dims
    n = layout.n_sites
    rho = np.asarray(rho).reshape(dims + dims)
    traced = 0
    for site in range(n):
        if site not in keep:
            ax = site - traced
            rho = np.trace(rho, axis1=ax, axis2=ax + (n - traced))
            traced += 1
    d_keep = math.prod(dims[s] for s in keep)
    return rho.reshape(d_keep, d_keep)
