"""Coherent transport and splitting of matter waves in three coupled wells.

Dimensionless units throughout: hbar = m = omega_x = 1; lengths in units
of the trap ground-state size, energies in the trap level spacing, times
in inverse trap frequencies.
"""

__version__ = "0.1.0"

from .errors import (
    BasisUnresolvedError,
    BoundaryBreachError,
    ConfigError,
    NormDriftError,
    TriwellError,
)
from .potentials import (
    PairSchedule,
    PerturbationSpec,
    TrajectorySpec,
    TrapParams,
    WaveguideGeometry,
    composite_potential,
    gaussian_trap,
    trap_centers,
    waveguide_potential,
)
from .spectral import (
    CouplingSchedule,
    Grid1D,
    LocalizedBasis,
    coupling_schedule,
    localized_basis,
    stationary_states,
    tunneling_splitting,
)
from .threemode import (
    ThreeModeHamiltonian,
    ThreeModeState,
    dark_state,
    instantaneous_spectrum,
    mixing_angle,
)
from .tdse1d import RunResult, Wavefunction1D, ground_state, run_cpt, run_rabi, run_stirap

__all__ = [
    "__version__",
    "TriwellError", "BasisUnresolvedError", "NormDriftError",
    "BoundaryBreachError", "ConfigError",
    "TrapParams", "PairSchedule", "TrajectorySpec", "PerturbationSpec",
    "WaveguideGeometry", "gaussian_trap", "composite_potential",
    "trap_centers", "waveguide_potential",
    "Grid1D", "LocalizedBasis", "CouplingSchedule", "stationary_states",
    "localized_basis", "tunneling_splitting", "coupling_schedule",
    "ThreeModeState", "ThreeModeHamiltonian", "mixing_angle", "dark_state",
    "instantaneous_spectrum",
    "Wavefunction1D", "RunResult", "ground_state", "run_stirap", "run_cpt",
    "run_rabi",
]
