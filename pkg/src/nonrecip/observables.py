"""Physical quantities extracted from states.

Qubit populations, cavity occupations, Wootters concurrence of the reduced
two-qubit state, and a centered moving average for smoothing driven
time series.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import (
    CAVITY_1,
    QUBIT_L,
    QUBIT_R,
    SIGMA_Y,
    SpaceLayout,
    embed,
    number,
)
from .linalg import hermitian_eig, kron, psd_sqrt


class StateError(ValueError):
    """Density matrix violates a required state property."""


def populations(rho: np.ndarray, layout: SpaceLayout):
    """(P_L, P_R, n1, n2): qubit excited populations and cavity occupations."""
    p = []
    for m, site in enumerate((QUBIT_L, QUBIT_R, CAVITY_1, CAVITY_1 + 1)):
        nop = embed(number(layout.dims[site]), site, layout)
        val = np.trace(rho @ nop)
        p.append(float(val.real))
    return tuple(p)


def _population_projectors(layout: SpaceLayout) -> np.ndarray:
    """Diagonal weights so populations reduce to dot products with diag(rho)."""
    weights = np.empty((4, layout.dim))
    for m, site in enumerate((QUBIT_L, QUBIT_R, CAVITY_1, CAVITY_1 + 1)):
        weights[m] = np.diag(embed(number(layout.dims[site]), site, layout)).real
    return weights


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    lambdas: tuple[float, float, float, float]  # decreasing


_SYSY = kron(SIGMA_Y, SIGMA_Y)


def concurrence(rho2: np.ndarray) -> ConcurrenceResult:
    """Wootters concurrence of a 4x4 two-qubit density matrix.

    Computed through the Hermitian route: the lambda_i are the square roots
    of the eigenvalues of sqrt(rho) rho_tilde sqrt(rho), with rho_tilde the
    spin-flipped state (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
    """
    rho2 = np.asarray(rho2, dtype=complex)
    if rho2.shape != (4, 4):
        raise StateError(f"expected a 4x4 two-qubit state, got shape {rho2.shape}")
    if abs(np.trace(rho2).real - 1.0) > 1e-9:
        raise StateError("two-qubit state trace differs from 1 beyond tolerance")
    rho_flipped = _SYSY @ rho2.conj() @ _SYSY
    s = psd_sqrt(rho2, tol=1e-9)
    w, _ = hermitian_eig(s @ rho_flipped @ s, tol=1e-8)
    # roundoff can leave tiny negatives; clamp before the square root
    w = np.clip(w, 0.0, None)
    lams = np.sort(np.sqrt(w))[::-1]
    value = max(0.0, lams[0] - lams[1] - lams[2] - lams[3])
    return ConcurrenceResult(value=float(value), lambdas=tuple(float(x) for x in lams))


def coarse_grain(series: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average with shrunken windows at the endpoints.

    `window` is a sample count (>= 2); it may not exceed the series length.
    """
    series = np.asarray(series, dtype=float)
    n = series.size
    if window < 2:
        raise ValueError("window must span at least 2 samples")
    if window > n:
        raise ValueError(f"window ({window}) longer than series ({n})")
    half = window // 2
    cum = np.concatenate(([0.0], np.cumsum(series)))
    out = np.empty(n)
    for i in range(n):
        # interior windows hold exactly `window` samples so integer-period
        # components cancel identically; endpoint windows shrink
        lo = max(0, i - half)
        hi = min(n, lo + window)
        out[i] = (cum[hi] - cum[lo]) / (hi - lo)
    return out
