"""Three-level model of the coupled trap triple.

Restricted to one localized orbital per well, the system is a three-level
ladder in Lambda configuration: couplings -J_LM, -J_MR on the
off-diagonals and on-site energy offsets on the diagonal.  In the
(L, M, R) basis

    H = [[ 0,      -J_LM,    0     ],
         [-J_LM,   -delta_M, -J_MR ],
         [ 0,      -J_MR,    -delta_R]],

with delta_M = mu_M - mu_L and delta_R = mu_R - mu_L.  At delta_R = 0 the
dark state cos(T)|L> - sin(T)|R> with tan(T) = J_LM/J_MR is an exact null
eigenvector, which is what the counterintuitive pulse ordering exploits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import CouplingSchedule

__all__ = [
    "ThreeModeState",
    "ThreeModeHamiltonian",
    "ThreeModeTrajectory",
    "SpectrumResult",
    "mixing_angle",
    "dark_state",
    "propagate",
    "instantaneous_spectrum",
]


@dataclass(frozen=True)
class ThreeModeState:
    """Complex amplitudes (c_L, c_M, c_R), unit norm."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex)
        if c.shape != (3,):
            raise ValueError("need exactly three amplitudes")
        object.__setattr__(self, "c", c)

    @classmethod
    def localized(cls, site: int) -> "ThreeModeState":
        c = np.zeros(3, dtype=complex)
        c[site] = 1.0
        return cls(c)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.c) ** 2

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.c))


@dataclass(frozen=True)
class ThreeModeHamiltonian:
    j_lm: float
    j_mr: float
    delta_m: float = 0.0
    delta_r: float = 0.0

    def matrix(self) -> np.ndarray:
        return np.array([
            [0.0, -self.j_lm, 0.0],
            [-self.j_lm, -self.delta_m, -self.j_mr],
            [0.0, -self.j_mr, -self.delta_r],
        ])


def mixing_angle(j_lm: float, j_mr: float) -> float:
    """Theta = atan2(J_LM, J_MR), in [0, pi/2] for nonnegative couplings."""
    if j_lm == 0.0 and j_mr == 0.0:
        raise ValueError("mixing angle undefined for two vanishing couplings")
    return math.atan2(j_lm, j_mr)


def dark_state(theta: float) -> ThreeModeState:
    """The decoupled superposition cos(theta)|L> - sin(theta)|R>."""
    return ThreeModeState(np.array([math.cos(theta), 0.0, -math.sin(theta)],
                                   dtype=complex))


def _hamiltonians(schedule: CouplingSchedule, ts: np.ndarray) -> np.ndarray:
    """Stacked 3x3 Hamiltonians at the given times (linear interpolation)."""
    j_lm = np.interp(ts, schedule.t, schedule.j_lm)
    j_mr = np.interp(ts, schedule.t, schedule.j_mr)
    d_m = np.interp(ts, schedule.t, schedule.mu[:, 1] - schedule.mu[:, 0])
    d_r = np.interp(ts, schedule.t, schedule.mu[:, 2] - schedule.mu[:, 0])
    h = np.zeros((len(ts), 3, 3))
    h[:, 0, 1] = h[:, 1, 0] = -j_lm
    h[:, 1, 2] = h[:, 2, 1] = -j_mr
    h[:, 1, 1] = -d_m
    h[:, 2, 2] = -d_r
    return h


@dataclass(frozen=True)
class ThreeModeTrajectory:
    t: np.ndarray
    amplitudes: np.ndarray  # (len(t), 3)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def final(self) -> ThreeModeState:
        return ThreeModeState(self.amplitudes[-1])


def propagate(initial: ThreeModeState, schedule: CouplingSchedule,
              dt: float = 0.05, t_end: float | None = None) -> ThreeModeTrajectory:
    """Unitary evolution under the schedule via exact midpoint exponentials.

    Each step applies exp(-i H(t_mid) dt) built from the eigendecomposition
    of the (real symmetric) instantaneous Hamiltonian, so norm is conserved
    to rounding.
    """
    if t_end is None:
        t_end = schedule.duration
    if t_end > schedule.duration * (1 + 1e-12):
        raise ValueError(
            f"schedule covers [0, {schedule.duration}], cannot evolve to {t_end}")
    n_steps = max(1, int(round(t_end / dt)))
    dt = t_end / n_steps
    steps = np.arange(n_steps)
    h = _hamiltonians(schedule, (steps + 0.5) * dt)
    hmax = np.abs(h).sum(axis=2).max()
    if dt * hmax >= 0.1:
        raise ValueError(f"dt*|H| = {dt * hmax:.3f} >= 0.1; reduce dt")
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * dt)
    props = np.einsum("tik,tk,tjk->tij", v, phases, v)
    amps = np.empty((n_steps + 1, 3), dtype=complex)
    amps[0] = initial.c
    c = initial.c.copy()
    for i in range(n_steps):
        c = props[i] @ c
        amps[i + 1] = c
    return ThreeModeTrajectory(t=np.concatenate([[0.0], (steps + 1) * dt]),
                               amplitudes=amps)


@dataclass(frozen=True)
class SpectrumResult:
    t: np.ndarray
    energies: np.ndarray      # (len(t), 3), continued along eigenvectors
    states: np.ndarray        # (len(t), 3, 3), column a is curve a's vector
    min_gap: float
    t_min_gap: float


def instantaneous_spectrum(schedule: CouplingSchedule) -> SpectrumResult:
    """Eigenvalue curves with adiabatic continuation.

    Eigenpairs at successive samples are matched by maximum eigenvector
    overlap, so a curve keeps its identity through diabatic crossings
    instead of being reordered by energy.  Also reports the minimal gap
    between any two continued curves and the time where it occurs.
    """
    h = _hamiltonians(schedule, schedule.t)
    w, v = np.linalg.eigh(h)
    energies = np.empty_like(w)
    states = np.empty_like(v)
    energies[0] = w[0]
    states[0] = v[0]
    for i in range(1, len(schedule.t)):
        overlap = np.abs(states[i - 1].T @ v[i])
        # greedy assignment: three curves, largest overlaps first
        perm = [-1, -1, -1]
        taken = set()
        for _ in range(3):
            a, b = np.unravel_index(np.argmax(overlap), overlap.shape)
            perm[a] = b
            overlap[a, :] = -1.0
            overlap[:, b] = -1.0
            taken.add(b)
        energies[i] = w[i][perm]
        states[i] = v[i][:, perm]
        flip = np.sum(states[i - 1] * states[i], axis=0) < 0
        states[i][:, flip] *= -1.0
    gaps = np.stack([np.abs(energies[:, a] - energies[:, b])
                     for a, b in ((0, 1), (0, 2), (1, 2))])
    flat = int(np.argmin(gaps))
    i_t = flat % energies.shape[0]
    return SpectrumResult(t=schedule.t, energies=energies, states=states,
                          min_gap=float(gaps.flat[flat]),
                          t_min_gap=float(schedule.t[i_t]))
