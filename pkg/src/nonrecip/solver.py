"""Lindblad master-equation integrator.

Fixed-step classical RK4 on the dense density matrix, for static or
explicitly time-dependent Hamiltonians. Deterministic stepping keeps
regression outputs bit-stable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .hilbert import SpaceLayout, partial_trace
from .linalg import hermiticity_defect
from .observables import _population_projectors, concurrence

TRACE_TOL = 1e-8
TRACE_FAIL = 1e-6
EIG_FLOOR = -1e-7
HERM_TOL = 1e-9


class TraceDriftError(RuntimeError):
    """Trace drifted beyond tolerance; the step size failed."""


class IntegrationQualityError(RuntimeError):
    """State left the physical set beyond tolerance."""


@dataclass(frozen=True)
class Trajectory:
    """Time series of populations (and optionally concurrence / snapshots)."""

    times: np.ndarray
    p_left: np.ndarray
    p_right: np.ndarray
    n_cav1: np.ndarray
    n_cav2: np.ndarray
    concurrence: np.ndarray | None = None
    snapshots: list[tuple[float, np.ndarray]] = field(default_factory=list)
    dt: float = 0.0


def _step_size(omega_max: float, dt_max: float = 0.02) -> float:
    """dt = min(dt_max, (2 pi / omega_max) / 40)."""
    if omega_max <= 0:
        return dt_max
    return min(dt_max, (2 * math.pi / omega_max) / 40.0)


def evolve_master(
    hamiltonian: np.ndarray | Callable[[float], np.ndarray],
    collapse: list[tuple[np.ndarray, float]],
    rho0: np.ndarray,
    tspan: tuple[float, float],
    layout: SpaceLayout,
    *,
    n_out: int = 801,
    omega_max: float | None = None,
    dt: float | None = None,
    want_concurrence: bool = False,
    snapshot_times=None,
) -> Trajectory:
    """Integrate drho/dt = -i[H(t), rho] + sum_j rate_j D[O_j] rho.

    `hamiltonian` is a matrix (static) or a pure function of t, re-evaluated
    at every RK4 substage. `omega_max` is the largest frequency scale of H
    and bounds the step; when omitted it is estimated from the diagonal of
    H at the initial time. Populations, occupations and (optionally) the
    two-qubit concurrence are evaluated on the output grid only.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    dim = layout.dim
    if rho0.shape != (dim, dim):
        raise ValueError(f"rho0 shape {rho0.shape} does not match layout dimension {dim}")
    if hermiticity_defect(rho0) > 1e-10:
        raise ValueError("rho0 is not Hermitian within tolerance")
    if abs(np.trace(rho0).real - 1.0) > 1e-10:
        raise ValueError("rho0 trace differs from 1 beyond tolerance")
    if min(np.linalg.eigvalsh(rho0)) < -1e-10:
        raise ValueError("rho0 is not positive semidefinite within tolerance")
    if any(rate < 0 for _, rate in collapse):
        raise ValueError("collapse rates must be non-negative")

    static = not callable(hamiltonian)
    h0 = np.asarray(hamiltonian, dtype=complex) if static else np.asarray(hamiltonian(tspan[0]))
    if omega_max is None:
        omega_max = float(np.max(np.abs(np.diag(h0).real))) if dim else 0.0
    if dt is None:
        dt = _step_size(omega_max)

    ops = [np.asarray(o, dtype=complex) for o, _ in collapse]
    rates = [float(r) for _, r in collapse]
    # anti-Hermitian damping term K = sum rate O^dag O enters via
    # A(t) = H(t) - i K / 2 so the RHS needs only 2 + n_channels matmuls
    k_sum = np.zeros((dim, dim), dtype=complex)
    for o, r in zip(ops, rates):
        k_sum += r * (o.conj().T @ o)
    damp = -0.5j * k_sum
    jump = [(r, o, o.conj().T) for o, r in zip(ops, rates) if r > 0]

    if static:
        a_static = h0 + damp

        def rhs(t, rho):
            x = a_static @ rho
            out = -1j * (x - x.conj().T)
            for r, o, od in jump:
                out += r * (o @ rho @ od)
            return out

    else:

        def rhs(t, rho):
            a = hamiltonian(t) + damp
            x = a @ rho
            out = -1j * (x - x.conj().T)
            for r, o, od in jump:
                out += r * (o @ rho @ od)
            return out

    t0, t1 = tspan
    times = np.linspace(t0, t1, n_out)
    snap_req = sorted(snapshot_times) if snapshot_times is not None else []
    weights = _population_projectors(layout)

    p_out = np.empty((n_out, 4))
    c_out = np.empty(n_out) if want_concurrence else None
    snapshots: list[tuple[float, np.ndarray]] = []

    def record(i, t, rho):
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > TRACE_FAIL:
            raise TraceDriftError(f"trace drift {abs(tr - 1.0):.3e} at t={t:.3f}")
        if abs(tr - 1.0) > TRACE_TOL or hermiticity_defect(rho) > HERM_TOL:
            raise IntegrationQualityError(f"state quality check failed at t={t:.3f}")
        if float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()) < EIG_FLOOR:
            raise IntegrationQualityError(f"negative eigenvalue beyond tolerance at t={t:.3f}")
        diag = np.diag(rho).real
        p_out[i] = weights @ diag
        if want_concurrence:
            rho2 = partial_trace(rho, (0, 1), layout)
            c_out[i] = concurrence(rho2).value
        if snap_req and any(abs(t - ts) < 1e-12 for ts in snap_req):
            snapshots.append((t, rho.copy()))

    rho = rho0.copy()
    record(0, times[0], rho)
    for i in range(1, n_out):
        span = times[i] - times[i - 1]
        n_sub = max(1, math.ceil(span / dt - 1e-12))
        h = span / n_sub
        t = times[i - 1]
        for _ in range(n_sub):
            k1 = rhs(t, rho)
            k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2)
            k4 = rhs(t + h, rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        record(i, times[i], rho)

    return Trajectory(
        times=times,
        p_left=p_out[:, 0],
        p_right=p_out[:, 1],
        n_cav1=p_out[:, 2],
        n_cav2=p_out[:, 3],
        concurrence=c_out,
        snapshots=snapshots,
        dt=dt,
    )
