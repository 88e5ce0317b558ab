"""Engineered-frame system model.

Builds the two-qubit / two-cavity Hamiltonian with engineered complex
couplings, the collapse-operator set (cavity decay plus optional qubit
relaxation and pure dephasing), and the named parameter presets. All
frequencies and rates are in units of the reference cavity decay rate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import (
    CAVITY_1,
    QUBIT_L,
    QUBIT_R,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    SpaceLayout,
    destroy,
    embed,
    number,
)

ADIABATICITY_WARN_RATIO = 0.2


class ParameterError(ValueError):
    """Physically inadmissible parameter value."""


@dataclass(frozen=True)
class SystemParams:
    """Engineered-frame parameters (units of the reference cavity decay rate).

    delta / kappa: per-channel cavity detunings and decay rates.
    g_left / g_right: complex couplings of each qubit to channels 1 and 2.
    qubit_detuning: (left, right) qubit detunings in the rotating frame.
    gamma / gamma_phi: qubit relaxation and pure-dephasing rates.
    """

    delta: tuple[float, float]
    g_left: tuple[complex, complex]
    g_right: tuple[complex, complex]
    kappa: tuple[float, float] = (1.0, 1.0)
    qubit_detuning: tuple[float, float] = (0.0, 0.0)
    gamma: float = 0.0
    gamma_phi: float = 0.0

    def __post_init__(self):
        if any(k <= 0 for k in self.kappa):
            raise ParameterError(f"cavity decay rates must be positive, got {self.kappa}")
        if self.gamma < 0 or self.gamma_phi < 0:
            raise ParameterError("qubit decoherence rates must be non-negative")

    @property
    def denominators(self) -> tuple[complex, complex]:
        """Complex channel denominators delta + i kappa / 2."""
        return tuple(d + 0.5j * k for d, k in zip(self.delta, self.kappa))

    @property
    def adiabaticity_ratio(self) -> float:
        """max |g| / |delta + i kappa/2| over qubits and channels."""
        dens = self.denominators
        return max(
            abs(g) / abs(dens[n])
            for n in range(2)
            for g in (self.g_left[n], self.g_right[n])
        )

    @property
    def adiabaticity_warning(self) -> bool:
        return self.adiabaticity_ratio > ADIABATICITY_WARN_RATIO


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

#: Channel detunings (units of kappa) for the two published parameter sets.
PRESET_DELTAS: dict[str, tuple[float, float]] = {
    "SetI": (0.5, -0.5),
    "SetII": (1.0 / 200.0, -50.0),
}

#: Physical reference scales for the presets.
PHYSICAL_SCALES = {
    "kappa_over_2pi_MHz": 50.0,
    "gamma_over_2pi_kHz": 10.0,
    "gamma_phi_over_2pi_kHz": 30.0,
}


def figure_couplings(
    delta: tuple[float, float],
    kappa: tuple[float, float] = (1.0, 1.0),
    dphi: float = 0.0,
    prefactor: float = 0.1,
) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    """Coupling recipe used in the dynamics figures.

    |g_m^(n)| = prefactor * sqrt(kappa * |delta^(n) + i kappa^(n)/2|), equal
    for both qubits, with the coherent-phase difference `dphi` placed on the
    right qubit's channel-2 coupling. This makes the per-channel effective
    amplitudes equal, so the factored coupling formula applies exactly.
    """
    dens = [d + 0.5j * k for d, k in zip(delta, kappa)]
    kref = kappa[0]
    g1 = prefactor * np.sqrt(kref * abs(dens[0]))
    g2 = prefactor * np.sqrt(kref * abs(dens[1]))
    g_left = (complex(g1), complex(g2))
    g_right = (complex(g1), complex(g2 * np.exp(-1j * dphi)))
    return g_left, g_right


def preset(
    name: str,
    dphi: float = 0.0,
    gamma: float = 0.0,
    gamma_phi: float = 0.0,
    qubit_detuning: tuple[float, float] = (0.0, 0.0),
    coupling_prefactor: float = 0.1,
) -> SystemParams:
    """SystemParams for a named parameter set with the figure coupling recipe."""
    if name not in PRESET_DELTAS:
        raise ParameterError(f"unknown preset {name!r}; choose from {sorted(PRESET_DELTAS)}")
    delta = PRESET_DELTAS[name]
    g_left, g_right = figure_couplings(delta, dphi=dphi, prefactor=coupling_prefactor)
    return SystemParams(
        delta=delta,
        g_left=g_left,
        g_right=g_right,
        qubit_detuning=qubit_detuning,
        gamma=gamma,
        gamma_phi=gamma_phi,
    )


# ---------------------------------------------------------------------------
# operator builders
# ---------------------------------------------------------------------------

def build_hamiltonian(p: SystemParams, layout: SpaceLayout) -> np.ndarray:
    """Engineered-frame Hamiltonian.

    H = -sum_m (Delta_m/2) sigma_m^z - sum_n Delta^(n) c^dag c
        + sum_n [(g_L^(n) sigma_L^+ + g_R^(n) sigma_R^+) c^(n) + h.c.]
    """
    if layout.n_sites != 4 or layout.dims[0] != 2 or layout.dims[1] != 2:
        raise ParameterError("layout must be the standard [2, 2, N1, N2] convention")
    h = np.zeros((layout.dim, layout.dim), dtype=complex)
    for m, site in enumerate((QUBIT_L, QUBIT_R)):
        if p.qubit_detuning[m] != 0.0:
            h -= 0.5 * p.qubit_detuning[m] * embed(SIGMA_Z, site, layout)
    raising = [embed(SIGMA_PLUS, QUBIT_L, layout), embed(SIGMA_PLUS, QUBIT_R, layout)]
    for n in range(2):
        site = CAVITY_1 + n
        c = embed(destroy(layout.dims[site]), site, layout)
        h -= p.delta[n] * embed(number(layout.dims[site]), site, layout)
        coupling = (p.g_left[n] * raising[0] + p.g_right[n] * raising[1]) @ c
        h += coupling + coupling.conj().T
    return h


def build_collapse_ops(p: SystemParams, layout: SpaceLayout) -> list[tuple[np.ndarray, float]]:
    """Collapse channels as (operator, rate) pairs.

    Always the two cavity decays; qubit relaxation (sigma^-, gamma) and pure
    dephasing (sigma^z, gamma_phi/2) are appended when their rates are nonzero.
    """
    ops = []
    for n in range(2):
        site = CAVITY_1 + n
        ops.append((embed(destroy(layout.dims[site]), site, layout), p.kappa[n]))
    if p.gamma > 0:
        for site in (QUBIT_L, QUBIT_R):
            ops.append((embed(SIGMA_MINUS, site, layout), p.gamma))
    if p.gamma_phi > 0:
        for site in (QUBIT_L, QUBIT_R):
            ops.append((embed(SIGMA_Z, site, layout), p.gamma_phi / 2.0))
    return ops
