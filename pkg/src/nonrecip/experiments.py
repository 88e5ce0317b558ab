"""Scenario runner, isolation-factor sweeps, and modulation validation.

Everything here writes deterministic CSV/JSON files: numeric cells carry 17
significant digits so re-running a scenario with identical configuration
produces byte-identical CSV bodies.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .effective import compute_effective, evolve_effective
from .hilbert import basis_state, ket_to_dm, standard_layout
from .model import (
    PRESET_DELTAS,
    SystemParams,
    build_collapse_ops,
    build_hamiltonian,
    figure_couplings,
    preset,
)
from .modulation import (
    ModulationParams,
    engineered_couplings,
    hamiltonian_provider,
    preset_modulation,
    rwa_margin,
)
from .observables import coarse_grain
from .solver import Trajectory, evolve_master

OUTDIR_ENV = "NONRECIP_OUTDIR"
NAN_SENTINEL = "nan"


class GridError(ValueError):
    """Sweep grid contains values that cannot be realized."""


def default_outdir() -> Path:
    return Path(os.environ.get(OUTDIR_ENV, "out"))


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return NAN_SENTINEL
    return format(x, ".17g")


def write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(x) if isinstance(x, float) else str(x) for x in row) + "\n")


def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    return obj


def write_metadata(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(_jsonable(payload), f, indent=2, sort_keys=True)
        f.write("\n")


def _params_dict(p: SystemParams) -> dict:
    return {
        "delta": p.delta,
        "kappa": p.kappa,
        "g_left": [complex(g) for g in p.g_left],
        "g_right": [complex(g) for g in p.g_right],
        "qubit_detuning": p.qubit_detuning,
        "gamma": p.gamma,
        "gamma_phi": p.gamma_phi,
        "adiabaticity_ratio": p.adiabaticity_ratio,
        "adiabaticity_warning": p.adiabaticity_warning,
    }


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

@dataclass
class Scenario:
    """A single dynamics run (one figure panel)."""

    name: str
    preset: str | SystemParams = "SetI"
    dphi: float = 0.0
    initial: str = "eg"
    tmax: float = 400.0
    decoherence: tuple[float, float] | None = None  # (gamma, gamma_phi)
    qubit_detuning: float = 0.0  # detuning of the right qubit
    model: str = "engineered"
    outputs: tuple[str, ...] = ("populations", "cavities", "concurrence")
    n_fock: int = 3
    n_out: int = 801

    def __post_init__(self):
        if self.tmax <= 0:
            raise ValueError("tmax must be positive")
        if self.initial not in ("eg", "ge"):
            raise ValueError("initial state must be 'eg' or 'ge'")
        if self.model not in ("engineered", "modulated", "effective"):
            raise ValueError(f"unknown model {self.model!r}")

    def resolve_params(self) -> SystemParams:
        gamma, gamma_phi = self.decoherence if self.decoherence else (0.0, 0.0)
        detuning = (0.0, self.qubit_detuning)
        if isinstance(self.preset, SystemParams):
            return self.preset
        return preset(
            self.preset,
            dphi=self.dphi,
            gamma=gamma,
            gamma_phi=gamma_phi,
            qubit_detuning=detuning,
        )


@dataclass
class RunResult:
    csv_path: Path
    meta_path: Path
    summary: dict
    trajectory: Trajectory | None = None


def _initial_rho(initial: str, layout):
    occ = (1, 0, 0, 0) if initial == "eg" else (0, 1, 0, 0)
    return ket_to_dm(basis_state(occ, layout))


def _simulate_engineered(s: Scenario, p: SystemParams, want_c: bool) -> Trajectory:
    layout = standard_layout(s.n_fock)
    h = build_hamiltonian(p, layout)
    collapse = build_collapse_ops(p, layout)
    omega_max = max(abs(d) for d in p.delta)
    return evolve_master(
        h,
        collapse,
        _initial_rho(s.initial, layout),
        (0.0, s.tmax),
        layout,
        n_out=s.n_out,
        omega_max=omega_max,
        want_concurrence=want_c,
    )


def _simulate_modulated(s: Scenario, p: SystemParams, mp: ModulationParams) -> Trajectory:
    layout = standard_layout(s.n_fock)
    collapse = build_collapse_ops(p, layout)
    # step must resolve the full energy spread of the populated sector:
    # two-photon cavity terms plus the peak qubit-frequency excursion
    amp_tot = max(sum(row) for row in mp.amp)
    omega_max = 2.0 * (max(abs(d) for d in mp.bare_detuning) + amp_tot)
    return evolve_master(
        hamiltonian_provider(mp, layout),
        collapse,
        _initial_rho(s.initial, layout),
        (0.0, s.tmax),
        layout,
        n_out=s.n_out,
        omega_max=omega_max,
    )


def run_scenario(s: Scenario, outdir: Path | None = None) -> RunResult:
    """Simulate one scenario and write its time-series CSV + metadata JSON."""
    outdir = Path(outdir) if outdir is not None else default_outdir()
    p = s.resolve_params()
    want_c = "concurrence" in s.outputs and s.model != "effective"

    solver_meta: dict = {"model": s.model, "n_out": s.n_out}
    try:
        if s.model == "effective":
            c0 = (1.0, 0.0) if s.initial == "eg" else (0.0, 1.0)
            eff = evolve_effective(p, c0, (0.0, s.tmax), n_out=s.n_out)
            header = ["t", "P_L", "P_R"]
            cols = [eff.times, eff.p_left, eff.p_right]
            traj = None
            summary = {
                "max_P_L": float(eff.p_left.max()),
                "max_P_R": float(eff.p_right.max()),
            }
        else:
            if s.model == "modulated":
                if not isinstance(s.preset, str):
                    raise ValueError("modulated model requires a named preset")
                mp = preset_modulation(s.preset, PRESET_DELTAS[s.preset], dphi=s.dphi)
                traj = _simulate_modulated(s, p, mp)
                solver_meta["drive_frequencies"] = mp.omega_d
            else:
                traj = _simulate_engineered(s, p, want_c)
            solver_meta["dt"] = traj.dt
            header = ["t", "P_L", "P_R", "n1", "n2"]
            cols = [traj.times, traj.p_left, traj.p_right, traj.n_cav1, traj.n_cav2]
            if want_c:
                header.append("C")
                cols.append(traj.concurrence)
            summary = {
                "max_P_L": float(traj.p_left.max()),
                "max_P_R": float(traj.p_right.max()),
                "final_P_L": float(traj.p_left[-1]),
                "final_P_R": float(traj.p_right[-1]),
            }
            if want_c:
                summary["max_C"] = float(traj.concurrence.max())
                summary["final_C"] = float(traj.concurrence[-1])
    except Exception as exc:
        raise type(exc)(f"scenario {s.name!r}: {exc}") from exc

    csv_path = outdir / f"{s.name}.csv"
    meta_path = outdir / f"{s.name}.json"
    write_csv(csv_path, header, zip(*[np.asarray(c, dtype=float) for c in cols]))
    write_metadata(
        meta_path,
        {
            "scenario": {
                "name": s.name,
                "preset": s.preset if isinstance(s.preset, str) else "custom",
                "dphi": s.dphi,
                "initial": s.initial,
                "tmax": s.tmax,
                "decoherence": s.decoherence,
                "qubit_detuning": s.qubit_detuning,
                "model": s.model,
                "n_fock": s.n_fock,
            },
            "params": _params_dict(p),
            "solver": solver_meta,
            "summary": summary,
            "version": __version__,
        },
    )
    return RunResult(csv_path, meta_path, summary, traj)


def run_scenarios(scenarios, outdir: Path | None = None, threads: int = 1):
    """Run independent scenarios in a thread pool; results in input order."""
    if threads <= 1:
        return [run_scenario(s, outdir) for s in scenarios]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(run_scenario, s, outdir) for s in scenarios]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# isolation-factor sweep
# ---------------------------------------------------------------------------

@dataclass
class SweepGrid:
    """Grid over coherent (dphi) and loss-induced (dtheta) phase differences."""

    dphi_axis: np.ndarray
    dtheta_axis: np.ndarray
    quantity: str = "dh"

    def __post_init__(self):
        self.dphi_axis = np.asarray(self.dphi_axis, dtype=float)
        self.dtheta_axis = np.asarray(self.dtheta_axis, dtype=float)
        for ax in (self.dphi_axis, self.dtheta_axis):
            if ax.size == 0 or np.any(np.diff(ax) <= 0):
                raise GridError("sweep axes must be non-empty and strictly increasing")
        if self.quantity not in ("dh", "h_forward", "h_backward"):
            raise GridError(f"unknown sweep quantity {self.quantity!r}")


def realize_channel_detunings(dtheta: float, kappa=(1.0, 1.0)):
    """Channel detunings whose loss-induced phase difference equals `dtheta`.

    Places the two loss phases symmetrically around pi/2, so
    Delta^(n) = (kappa^(n)/2) / tan(pi/2 -+ dtheta/2). Unreachable at
    |dtheta| >= pi (infinite detuning).
    """
    if abs(dtheta) >= math.pi:
        return None
    theta1 = math.pi / 2 - dtheta / 2
    theta2 = math.pi / 2 + dtheta / 2
    return (0.5 * kappa[0] / math.tan(theta1), 0.5 * kappa[1] / math.tan(theta2))


def sweep_isolation(grid: SweepGrid, base: SystemParams | None = None, strict: bool = False):
    """Isolation factor (or normalized coupling) over the phase grid.

    Returns (matrix, info). Cells where the requested dtheta cannot be
    realized by finite detunings, or where both directional couplings
    vanish, are NaN (emitted as the "nan" sentinel in CSV). With
    strict=True unreachable dtheta values raise GridError instead.
    """
    kappa = base.kappa if base is not None else (1.0, 1.0)
    dphi = grid.dphi_axis
    dtheta = grid.dtheta_axis
    out = np.full((dtheta.size, dphi.size), np.nan)
    unreachable = []
    undefined_count = 0
    phase = np.exp(-1j * dphi)  # g_R^(2) = g_L^(2) exp(-i dphi)
    for i, dt in enumerate(dtheta):
        realized = realize_channel_detunings(dt, kappa)
        if realized is None:
            unreachable.append(float(dt))
            continue
        d1, d2 = realized
        den1 = d1 + 0.5j * kappa[0]
        den2 = d2 + 0.5j * kappa[1]
        # equal-amplitude coupling recipe; any common prefactor cancels
        g1_sq = kappa[0] * abs(den1) * 0.01
        g2_sq = kappa[0] * abs(den2) * 0.01
        h_left = g1_sq / den1 + g2_sq * np.conj(phase) / den2
        h_right = g1_sq / den1 + g2_sq * phase / den2
        amp2 = 2.0 * g2_sq / abs(den2)  # 2G (recipe gives equal channel amps)
        fwd = np.abs(h_right)
        bwd = np.abs(h_left)
        if grid.quantity == "h_forward":
            out[i] = fwd / amp2
        elif grid.quantity == "h_backward":
            out[i] = bwd / amp2
        else:
            total = fwd + bwd
            defined = total >= 1e-15
            undefined_count += int(np.sum(~defined))
            row = np.full(dphi.size, np.nan)
            row[defined] = (fwd[defined] - bwd[defined]) / total[defined]
            out[i] = row
    if strict and unreachable:
        raise GridError(f"unreachable dtheta values: {unreachable}")
    info = {
        "quantity": grid.quantity,
        "unreachable_dtheta": unreachable,
        "undefined_cells": undefined_count + len(unreachable) * dphi.size,
    }
    return out, info


def write_sweep(grid: SweepGrid, outdir: Path | None = None, name: str = "isolation_map",
                base: SystemParams | None = None) -> RunResult:
    """Run a sweep and write the matrix CSV (rows dtheta, columns dphi)."""
    outdir = Path(outdir) if outdir is not None else default_outdir()
    matrix, info = sweep_isolation(grid, base)
    csv_path = outdir / f"{name}.csv"
    header = ["dtheta"] + [_fmt(v) for v in grid.dphi_axis]
    rows = (
        [float(dt)] + [float(v) for v in matrix[i]]
        for i, dt in enumerate(grid.dtheta_axis)
    )
    write_csv(csv_path, header, rows)
    meta_path = outdir / f"{name}.json"
    write_metadata(meta_path, {"sweep": info, "version": __version__,
                               "n_dphi": int(grid.dphi_axis.size),
                               "n_dtheta": int(grid.dtheta_axis.size)})
    return RunResult(csv_path, meta_path, info)


# ---------------------------------------------------------------------------
# modulation validation (engineered vs full time-dependent model)
# ---------------------------------------------------------------------------

def validate_modulation(
    s: Scenario,
    mp: ModulationParams | None = None,
    outdir: Path | None = None,
) -> RunResult:
    """Compare engineered-model dynamics with the coarse-grained full model.

    The engineered side uses the couplings synthesized from the modulation
    parameters (or the bare couplings when the modulation is switched off,
    in which case the two models coincide). The full-model populations are
    smoothed over one period of the slower drive tone before comparison.
    """
    if s.model != "modulated":
        raise ValueError("validate_modulation requires a scenario with model='modulated'")
    outdir = Path(outdir) if outdir is not None else default_outdir()
    if mp is None:
        if not isinstance(s.preset, str):
            raise ValueError("validate_modulation without explicit modulation "
                             "parameters requires a named preset")
        mp = preset_modulation(s.preset, PRESET_DELTAS[s.preset], dphi=s.dphi)

    unmodulated = all(a == 0 for row in mp.amp for a in row)
    if unmodulated:
        # no sidebands: the bare couplings are the engineered couplings and
        # the margin report is meaningless
        g = np.asarray(mp.lambda_bare, dtype=complex)
        flagged = []
    else:
        g = engineered_couplings(mp)
        flagged = [m for m in rwa_margin(mp) if m.flagged]
    p_eng = SystemParams(
        delta=mp.target_delta,
        g_left=(g[0, 0], g[0, 1]),
        g_right=(g[1, 0], g[1, 1]),
    )

    layout = standard_layout(s.n_fock)
    rho0 = _initial_rho(s.initial, layout)
    collapse = build_collapse_ops(p_eng, layout)
    traj_eng = evolve_master(
        build_hamiltonian(p_eng, layout), collapse, rho0, (0.0, s.tmax), layout,
        n_out=s.n_out, omega_max=max(abs(d) for d in p_eng.delta),
    )
    traj_full = _simulate_modulated(s, p_eng, mp)

    spacing = s.tmax / (s.n_out - 1)
    window = max(2, int(round((2 * math.pi / min(mp.omega_d)) / spacing)))
    window = min(window, s.n_out)
    pl_full = coarse_grain(traj_full.p_left, window)
    pr_full = coarse_grain(traj_full.p_right, window)
    d_l = np.abs(traj_eng.p_left - pl_full)
    d_r = np.abs(traj_eng.p_right - pr_full)

    csv_path = outdir / f"{s.name}_modcheck.csv"
    write_csv(
        csv_path,
        ["t", "P_L_eng", "P_R_eng", "P_L_full", "P_R_full", "dP_L", "dP_R"],
        zip(traj_eng.times, traj_eng.p_left, traj_eng.p_right, pl_full, pr_full, d_l, d_r),
    )
    summary = {
        "max_diff_P_L": float(d_l.max()),
        "max_diff_P_R": float(d_r.max()),
        "max_diff": float(max(d_l.max(), d_r.max())),
        "coarse_window_samples": window,
        "rwa_flagged": [
            {"channel": m.channel, "k": m.k, "l": m.l, "ratio": m.ratio} for m in flagged
        ],
    }
    meta_path = outdir / f"{s.name}_modcheck.json"
    write_metadata(
        meta_path,
        {
            "scenario": s.name,
            "params_engineered": _params_dict(p_eng),
            "modulation": {
                "omega_d": mp.omega_d,
                "bare_detuning": mp.bare_detuning,
                "target_delta": mp.target_delta,
                "sideband_sign": mp.sideband_sign,
                "modulation_index": mp.modulation_index,
            },
            "summary": summary,
            "warnings": ["rwa margin flagged"] if flagged else [],
            "version": __version__,
        },
    )
    return RunResult(csv_path, meta_path, summary, traj_full)
