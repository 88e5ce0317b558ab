import math

import numpy as np
import pytest
from scipy.linalg import expm

from nonrecip.hilbert import basis_state, ket_to_dm, standard_layout
from nonrecip.model import SystemParams, build_collapse_ops, build_hamiltonian, preset
from nonrecip.solver import Trajectory, _step_size, evolve_master

rng = np.random.default_rng(11)


def liouvillian(h, collapse, dim):
    """Row-major vectorization oracle: vec(A rho B) = (A kron B^T) vec(rho)."""
    eye = np.eye(dim)
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for o, r in collapse:
        od_o = o.conj().T @ o
        lv += r * (
            np.kron(o, o.conj())
            - 0.5 * np.kron(od_o, eye)
            - 0.5 * np.kron(eye, od_o.T)
        )
    return lv


def test_step_size_rule():
    assert _step_size(0.0) == 0.02
    assert _step_size(1.0) == 0.02
    assert math.isclose(_step_size(50.0), (2 * math.pi / 50.0) / 40.0)


def test_pure_cavity_decay_analytic():
    layout = standard_layout(3)
    p = SystemParams(delta=(0.5, -0.5), g_left=(0, 0), g_right=(0, 0))
    rho0 = ket_to_dm(basis_state((0, 0, 1, 0), layout))
    traj = evolve_master(
        build_hamiltonian(p, layout), build_collapse_ops(p, layout), rho0,
        (0.0, 5.0), layout, n_out=51, omega_max=0.5,
    )
    assert np.max(np.abs(traj.n_cav1 - np.exp(-traj.times))) < 1e-8
    assert np.max(np.abs(traj.n_cav2)) < 1e-12


def test_against_expm_oracle():
    # random Lindblad generator on the 16-dimensional truncated space
    layout = standard_layout(2)
    dim = layout.dim
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (a + a.conj().T) / 2
    o1 = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    collapse = [(o1, 0.3)]
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    rho0 = ket_to_dm(psi)

    t_final = 0.8
    traj = evolve_master(
        h, collapse, rho0, (0.0, t_final), layout,
        n_out=9, dt=0.002, snapshot_times=[t_final],
    )
    lv = liouvillian(h, collapse, dim)
    exact = (expm(lv * t_final) @ rho0.reshape(-1)).reshape(dim, dim)
    t_snap, rho_num = traj.snapshots[0]
    assert t_snap == t_final
    assert np.max(np.abs(rho_num - exact)) < 1e-8


def test_time_dependent_hamiltonian_against_magnus_free_case():
    # H(t) commuting at all times: diagonal drive, closed form available
    layout = standard_layout(2)
    dim = layout.dim
    base = np.diag(rng.normal(size=dim)).astype(complex)

    def h_of_t(t):
        return base * math.cos(2.0 * t)

    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    rho0 = ket_to_dm(psi)
    traj = evolve_master(
        h_of_t, [], rho0, (0.0, 3.0), layout, n_out=4,
        dt=0.005, snapshot_times=[3.0],
    )
    phase = np.diag(base).real * math.sin(2.0 * 3.0) / 2.0
    u = np.exp(-1j * phase)
    exact = (u[:, None] * rho0) * u.conj()[None, :]
    assert np.max(np.abs(traj.snapshots[0][1] - exact)) < 1e-8


def test_trace_and_positivity_enforced_on_outputs():
    layout = standard_layout(3)
    p = preset("SetI", dphi=-math.pi / 2)
    rho0 = ket_to_dm(basis_state((0, 1, 0, 0), layout))
    traj = evolve_master(
        build_hamiltonian(p, layout), build_collapse_ops(p, layout), rho0,
        (0.0, 30.0), layout, n_out=61, omega_max=0.5, want_concurrence=True,
    )
    # the solver raises if these fail internally; spot-check the outputs too
    assert np.all(traj.p_left >= -1e-9) and np.all(traj.p_left <= 1 + 1e-9)
    assert np.all(traj.concurrence >= 0.0)
    assert isinstance(traj, Trajectory)


def test_rejects_bad_initial_states():
    layout = standard_layout(2)
    dim = layout.dim
    h = np.zeros((dim, dim), dtype=complex)
    good = np.eye(dim, dtype=complex) / dim
    with pytest.raises(ValueError):
        evolve_master(h, [], 2 * good, (0, 1), layout)  # trace 2
    bad = good.copy()
    bad[0, 1] = 0.5
    with pytest.raises(ValueError):
        evolve_master(h, [], bad, (0, 1), layout)  # not Hermitian
    neg = np.diag(np.linspace(-0.1, 0.4, dim)).astype(complex)
    neg /= np.trace(neg).real
    with pytest.raises(ValueError):
        evolve_master(h, [], neg, (0, 1), layout)  # negative eigenvalue
    with pytest.raises(ValueError):
        evolve_master(h, [(np.eye(dim, dtype=complex), -1.0)], good, (0, 1), layout)


def test_deterministic_rerun():
    layout = standard_layout(3)
    p = preset("SetI", dphi=-math.pi / 2)
    rho0 = ket_to_dm(basis_state((1, 0, 0, 0), layout))
    args = (build_hamiltonian(p, layout), build_collapse_ops(p, layout), rho0,
            (0.0, 10.0), layout)
    t1 = evolve_master(*args, n_out=21, omega_max=0.5)
    t2 = evolve_master(*args, n_out=21, omega_max=0.5)
    assert np.array_equal(t1.p_left, t2.p_left)
    assert np.array_equal(t1.n_cav1, t2.n_cav1)
