import math

import numpy as np
import pytest

from nonrecip.hilbert import basis_state, standard_layout
from nonrecip.model import (
    ParameterError,
    PRESET_DELTAS,
    SystemParams,
    build_collapse_ops,
    build_hamiltonian,
    figure_couplings,
    preset,
)


def test_preset_deltas():
    assert PRESET_DELTAS["SetI"] == (0.5, -0.5)
    assert PRESET_DELTAS["SetII"] == (1.0 / 200.0, -50.0)


def test_preset_table_roundtrip():
    # published dimensionless values to their printed precision
    p1 = preset("SetI")
    d1 = p1.denominators
    assert round(abs(d1[0]), 3) == 0.707 and round(abs(d1[1]), 3) == 0.707
    assert round(abs(p1.g_left[0]), 3) == 0.084 and round(abs(p1.g_left[1]), 3) == 0.084
    p2 = preset("SetII")
    d2 = p2.denominators
    assert round(abs(d2[0]), 3) == 0.500 and round(abs(d2[1]), 3) == 50.002
    assert round(abs(p2.g_left[0]), 3) == 0.071 and round(abs(p2.g_left[1]), 3) == 0.707


def test_unknown_preset():
    with pytest.raises(ParameterError):
        preset("SetIII")


def test_invalid_rates():
    with pytest.raises(ParameterError):
        SystemParams(delta=(0, 0), g_left=(0, 0), g_right=(0, 0), kappa=(0.0, 1.0))
    with pytest.raises(ParameterError):
        SystemParams(delta=(0, 0), g_left=(0, 0), g_right=(0, 0), gamma=-1.0)


def test_figure_couplings_equal_amplitudes():
    g_left, g_right = figure_couplings((0.3, -2.0), dphi=-0.7)
    dens = (0.3 + 0.5j, -2.0 + 0.5j)
    amps = [abs(g_left[n] * np.conj(g_right[n])) / abs(dens[n]) for n in range(2)]
    assert abs(amps[0] - amps[1]) < 1e-14
    # phase difference lands on channel 2 of the right qubit
    assert abs(np.angle(g_left[1] * np.conj(g_right[1])) - (-0.7)) < 1e-14
    assert np.angle(g_left[0] * np.conj(g_right[0])) == 0.0


def test_adiabaticity_warning():
    assert not preset("SetI").adiabaticity_warning
    loud = preset("SetI", coupling_prefactor=0.3)
    assert loud.adiabaticity_warning


def test_hamiltonian_hermitian_and_matrix_elements():
    layout = standard_layout(3)
    p = preset("SetI", dphi=-math.pi / 2)
    h = build_hamiltonian(p, layout)
    assert np.max(np.abs(h - h.conj().T)) < 1e-14
    # <e,g,0,0| H |g,g,1,0> = g_L^(1)
    bra = basis_state((1, 0, 0, 0), layout)
    ket = basis_state((0, 0, 1, 0), layout)
    assert np.isclose(bra.conj() @ h @ ket, p.g_left[0])
    # <g,e,0,0| H |g,g,0,1> = g_R^(2)
    bra = basis_state((0, 1, 0, 0), layout)
    ket = basis_state((0, 0, 0, 1), layout)
    assert np.isclose(bra.conj() @ h @ ket, p.g_right[1])
    # cavity detuning enters as -Delta * n
    ket = basis_state((0, 0, 2, 0), layout)
    assert np.isclose(ket.conj() @ h @ ket, -2 * p.delta[0])


def test_qubit_detuning_term():
    layout = standard_layout(2)
    p = preset("SetI", qubit_detuning=(0.0, 0.3))
    h = build_hamiltonian(p, layout)
    excited = basis_state((0, 1, 0, 0), layout)
    ground = basis_state((0, 0, 0, 0), layout)
    # -Delta_R/2 sigma_z: excited right qubit shifted by -0.3/2 - (+0.3/2)
    assert np.isclose(
        (excited.conj() @ h @ excited) - (ground.conj() @ h @ ground), -0.3
    )


def test_collapse_ops_channels():
    layout = standard_layout(3)
    p = preset("SetI")
    ops = build_collapse_ops(p, layout)
    assert len(ops) == 2 and all(rate == 1.0 for _, rate in ops)
    p = preset("SetI", gamma=1e-3, gamma_phi=3e-3)
    ops = build_collapse_ops(p, layout)
    assert len(ops) == 6
    rates = [rate for _, rate in ops]
    assert rates == [1.0, 1.0, 1e-3, 1e-3, 1.5e-3, 1.5e-3]
