"""Adiabatic elimination of the lossy connecting modes.

Analytic self-energies, directional effective couplings, the isolation
factor, and a single-excitation integrator of the resulting 2x2
non-Hermitian dynamics.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import SystemParams

#: Below this combined coupling magnitude the isolation factor is undefined.
ISOLATION_UNDEFINED_TOL = 1e-15


class InstabilityError(RuntimeError):
    """Integrated amplitude norm grew beyond tolerance."""


@dataclass(frozen=True)
class EffectiveCoupling:
    """Derived quantities of the eliminated-cavity description.

    h_right / h_left are the rightward (L -> R) and leftward (R -> L)
    effective coupling coefficients; isolation is their normalized magnitude
    difference, or None when both couplings vanish.
    """

    self_energy_left: complex
    self_energy_right: complex
    h_left: complex
    h_right: complex
    channel_amp: tuple[float, float]
    coherent_phase: tuple[float, float]
    loss_phase: tuple[float, float]
    dphi: float
    dtheta: float
    phi0: float
    theta0: float
    isolation: float | None

    @property
    def isolation_defined(self) -> bool:
        return self.isolation is not None


def compute_effective(p: SystemParams) -> EffectiveCoupling:
    """Self-energies, directional couplings, phases, and isolation factor."""
    dens = p.denominators
    self_left = sum(abs(p.g_left[n]) ** 2 / dens[n] for n in range(2))
    self_right = sum(abs(p.g_right[n]) ** 2 / dens[n] for n in range(2))
    h_left = sum(p.g_left[n] * np.conj(p.g_right[n]) / dens[n] for n in range(2))
    h_right = sum(np.conj(p.g_left[n]) * p.g_right[n] / dens[n] for n in range(2))
    amp = tuple(abs(p.g_left[n] * np.conj(p.g_right[n])) / abs(dens[n]) for n in range(2))
    phi = tuple(cmath.phase(p.g_left[n] * np.conj(p.g_right[n])) for n in range(2))
    theta = tuple(cmath.phase(dens[n]) for n in range(2))
    total = abs(h_right) + abs(h_left)
    isolation = None if total < ISOLATION_UNDEFINED_TOL else (abs(h_right) - abs(h_left)) / total
    return EffectiveCoupling(
        self_energy_left=complex(self_left),
        self_energy_right=complex(self_right),
        h_left=complex(h_left),
        h_right=complex(h_right),
        channel_amp=amp,
        coherent_phase=phi,
        loss_phase=theta,
        dphi=phi[1] - phi[0],
        dtheta=theta[1] - theta[0],
        phi0=(phi[0] + phi[1]) / 2.0,
        theta0=(theta[0] + theta[1]) / 2.0,
        isolation=isolation,
    )


def h_factored(
    amp: float, phi0: float, theta0: float, dphi: float, dtheta: float
) -> tuple[complex, complex]:
    """Directional couplings from the equal-channel-amplitude factored form.

    Returns (h_right, h_left):
      h_right = 2 G exp(-i phi0 - i theta0) cos((dphi + dtheta)/2)
      h_left  = 2 G exp(+i phi0 - i theta0) cos((dphi - dtheta)/2)
    """
    h_right = 2 * amp * cmath.exp(-1j * phi0 - 1j * theta0) * math.cos((dphi + dtheta) / 2)
    h_left = 2 * amp * cmath.exp(1j * phi0 - 1j * theta0) * math.cos((dphi - dtheta) / 2)
    return h_right, h_left


def delta_theta_formula(d1: float, k1: float, d2: float, k2: float) -> float:
    """Loss-induced phase difference between the two channels.

    Two-argument arctangent form; equals arg(d2 + i k2/2) - arg(d1 + i k1/2)
    on the principal branch.
    """
    if k1 <= 0 or k2 <= 0:
        raise ValueError("decay rates must be positive")
    return math.atan2(2 * (d1 * k2 - d2 * k1), 4 * d1 * d2 + k1 * k2)


@dataclass(frozen=True)
class EffectiveTrajectory:
    times: np.ndarray
    amplitudes: np.ndarray  # shape (n, 2), columns (c_L, c_R)

    @property
    def p_left(self) -> np.ndarray:
        return np.abs(self.amplitudes[:, 0]) ** 2

    @property
    def p_right(self) -> np.ndarray:
        return np.abs(self.amplitudes[:, 1]) ** 2


def evolve_effective(
    p: SystemParams,
    c0,
    tspan: tuple[float, float],
    n_out: int = 801,
    dt: float | None = None,
) -> EffectiveTrajectory:
    """Integrate the single-excitation effective amplitudes with fixed-step RK4.

    d c_L/dt = -i (Lambda_L - Delta_L) c_L - i h_left  c_R
    d c_R/dt = -i (Lambda_R - Delta_R) c_R - i h_right c_L

    (sigma^z replaced by -1, valid in the single-excitation sector).
    """
    eff = compute_effective(p)
    gen = -1j * np.array(
        [
            [eff.self_energy_left - p.qubit_detuning[0], eff.h_left],
            [eff.h_right, eff.self_energy_right - p.qubit_detuning[1]],
        ],
        dtype=complex,
    )
    c0 = np.asarray(c0, dtype=complex)
    norm0 = float(np.linalg.norm(c0))
    if norm0 > 1.0 + 1e-12:
        raise ValueError("initial amplitude norm must be <= 1")
    if dt is None:
        scale = np.max(np.abs(gen))
        dt = 0.1 if scale == 0 else min(0.01 / scale, 0.1)
    t0, t1 = tspan
    times = np.linspace(t0, t1, n_out)
    out = np.empty((n_out, 2), dtype=complex)
    out[0] = c0
    c = c0.copy()
    for i in range(1, n_out):
        span = times[i] - times[i - 1]
        n_sub = max(1, math.ceil(span / dt))
        h = span / n_sub
        for _ in range(n_sub):
            k1 = gen @ c
            k2 = gen @ (c + 0.5 * h * k1)
            k3 = gen @ (c + 0.5 * h * k2)
            k4 = gen @ (c + h * k3)
            c = c + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if np.linalg.norm(c) > norm0 + 1e-6:
            raise InstabilityError(
                f"amplitude norm grew to {np.linalg.norm(c):.6f} at t={times[i]:.3f}"
            )
        out[i] = c
    return EffectiveTrajectory(times=times, amplitudes=out)
