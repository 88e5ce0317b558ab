"""Loss-induced nonreciprocal coupling between two qubits via lossy modes.

Simulation and analysis toolkit: engineered-frame master-equation dynamics,
adiabatic-elimination effective model, isolation-factor sweeps, two-tone
modulation engineering, and Wootters concurrence.
"""

__version__ = "0.1.0"

from .effective import (
    EffectiveCoupling,
    compute_effective,
    delta_theta_formula,
    evolve_effective,
    h_factored,
)
from .hilbert import SpaceLayout, basis_state, ket_to_dm, partial_trace, standard_layout
from .model import (
    PHYSICAL_SCALES,
    PRESET_DELTAS,
    SystemParams,
    build_collapse_ops,
    build_hamiltonian,
    figure_couplings,
    preset,
)
from .modulation import (
    MODULATION_PRESETS,
    ModulationParams,
    bessel_j,
    engineered_couplings,
    preset_modulation,
    rwa_margin,
)
from .observables import coarse_grain, concurrence, populations
from .solver import Trajectory, evolve_master

__all__ = [
    "EffectiveCoupling",
    "ModulationParams",
    "MODULATION_PRESETS",
    "PHYSICAL_SCALES",
    "PRESET_DELTAS",
    "SpaceLayout",
    "SystemParams",
    "Trajectory",
    "basis_state",
    "bessel_j",
    "build_collapse_ops",
    "build_hamiltonian",
    "coarse_grain",
    "compute_effective",
    "concurrence",
    "delta_theta_formula",
    "engineered_couplings",
    "evolve_effective",
    "evolve_master",
    "figure_couplings",
    "h_factored",
    "ket_to_dm",
    "partial_trace",
    "populations",
    "preset",
    "preset_modulation",
    "rwa_margin",
    "standard_layout",
]
