"""Stationary 1D solver and the localized three-well basis.

Eigenstates of H = p^2/2 + V(x) on a uniform grid via the second-order
finite-difference Hamiltonian (tridiagonal, solved with LAPACK).  The
low-energy eigenstates of a multi-well potential are rotated into
well-localized orbitals by diagonalizing the position operator restricted
to their span (a Wannier-style construction); on-site energies and
tunneling couplings are matrix elements of H in that basis:

    mu_a  =  <phi_a| H |phi_a>        (on-site energy)
    J_ab  = -<phi_a| H |phi_b>        (tunneling coupling, J > 0 here)

The half-splitting (E_antisym - E_sym)/2 of a double well equals J and is
used as the tunneling "Rabi frequency" of a trap pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import BasisUnresolvedError
from .potentials import (
    NO_PERTURBATION,
    PerturbationSpec,
    TrajectorySpec,
    TrapParams,
    trap_centers,
    triple_trap_potential,
    two_trap_potential,
)

__all__ = [
    "Grid1D",
    "LocalizedBasis",
    "CouplingSchedule",
    "stationary_states",
    "localized_basis",
    "tunneling_splitting",
    "coupling_schedule",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [x_min, x_max), n a power of two for FFT reuse."""

    x_min: float = -16.0
    x_max: float = 16.0
    n: int = 1024

    def __post_init__(self):
        if self.x_max <= self.x_min:
            raise ValueError("need x_max > x_min")
        if self.n < 16 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two >= 16, got {self.n}")
        if self.dx >= 0.25:
            raise ValueError(f"grid too coarse: dx = {self.dx} >= 0.25")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        """FFT angular wavenumbers matching numpy's transform layout."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        return np.vdot(f, g) * self.dx

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(np.sum(np.abs(f) ** 2) * self.dx))


DEFAULT_GRID = Grid1D()


def stationary_states(v: np.ndarray, grid: Grid1D, k: int):
    """k lowest eigenpairs of the finite-difference Hamiltonian.

    Returns (energies, states) with energies ascending and states of shape
    (k, n), L2-normalized with the grid measure (sum |psi|^2 dx = 1).
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (grid.n,):
        raise ValueError(f"potential shape {v.shape} does not match grid n={grid.n}")
    if not np.all(np.isfinite(v)):
        raise ValueError("potential contains non-finite samples")
    if not 1 <= k <= grid.n:
        raise ValueError(f"requested {k} states from a grid of {grid.n} points")
    inv2 = 1.0 / grid.dx**2
    diag = inv2 + v
    offdiag = np.full(grid.n - 1, -0.5 * inv2)
    energies, vecs = eigh_tridiagonal(diag, offdiag, select="i",
                                      select_range=(0, k - 1))
    states = vecs.T / np.sqrt(grid.dx)
    return energies, states


@dataclass(frozen=True)
class LocalizedBasis:
    """Well-localized orbitals with on-site energies and couplings.

    phi has shape (n_sites, n_grid), ordered left to right.  J[a, b] is the
    coupling -<phi_a|H|phi_b>; mu[a] the on-site energy <phi_a|H|phi_a>.
    """

    phi: np.ndarray
    mu: np.ndarray
    J: np.ndarray
    positions: np.ndarray
    grid: Grid1D = field(repr=False, default=DEFAULT_GRID)

    @property
    def phi_L(self): return self.phi[0]
    @property
    def phi_M(self): return self.phi[1]
    @property
    def phi_R(self): return self.phi[-1]
    @property
    def mu_L(self): return float(self.mu[0])
    @property
    def mu_M(self): return float(self.mu[1])
    @property
    def mu_R(self): return float(self.mu[-1])
    @property
    def J_LM(self): return float(self.J[0, 1])
    @property
    def J_MR(self): return float(self.J[1, -1])

    @property
    def J_LR(self) -> float:
        """Next-nearest-neighbor coupling; diagnostic only, not used in the
        three-mode model."""
        return float(self.J[0, -1])

    def project(self, psi: np.ndarray) -> np.ndarray:
        """Amplitudes <phi_a|psi> on the localized orbitals."""
        return self.phi.conj() @ psi * self.grid.dx


def localized_basis(energies: np.ndarray, states: np.ndarray,
                    centers, grid: Grid1D) -> LocalizedBasis:
    """Rotate low-energy eigenstates into one orbital per well.

    The position operator restricted to span(states) is diagonalized; its
    eigenvectors, ordered by position eigenvalue and sign-fixed to be
    positive at the corresponding trap center, become the localized
    orbitals.  Raises BasisUnresolvedError when position eigenvalues are
    too close to assign orbitals to distinct wells.
    """
    energies = np.asarray(energies, dtype=float)
    states = np.asarray(states, dtype=float)
    centers = np.sort(np.asarray(centers, dtype=float))
    m = len(energies)
    if states.shape != (m, grid.n) or len(centers) != m:
        raise ValueError("need one center per state and states on the grid")
    xop = (states * grid.x) @ states.T * grid.dx
    xop = 0.5 * (xop + xop.T)
    pos, rot = np.linalg.eigh(xop)
    if np.min(np.diff(pos)) < 1e-2:
        raise BasisUnresolvedError(
            f"position eigenvalues {pos} do not resolve distinct wells")
    phi = rot.T @ states
    for a in range(m):
        idx = int(np.argmin(np.abs(grid.x - centers[a])))
        if phi[a, idx] < 0:
            phi[a] = -phi[a]
            rot[:, a] = -rot[:, a]
    hmat = (rot.T * energies) @ rot
    return LocalizedBasis(phi=phi, mu=np.diag(hmat).copy(), J=-hmat,
                          positions=pos, grid=grid)


def localize_triple(a_l: float, a_r: float,
                    p: TrapParams = TrapParams(),
                    grid: Grid1D = DEFAULT_GRID,
                    gamma: float = 0.0) -> LocalizedBasis:
    """Localized basis of a static three-trap composite."""
    v = triple_trap_potential(grid.x, a_l, a_r, p, gamma)
    energies, states = stationary_states(v, grid, 3)
    return localized_basis(energies, states, (a_l, 0.0, a_r), grid)


def localize_composite(t: float, traj: TrajectorySpec,
                       pert: PerturbationSpec = NO_PERTURBATION,
                       p: TrapParams = TrapParams(),
                       grid: Grid1D = DEFAULT_GRID) -> LocalizedBasis:
    """Localized basis of the instantaneous three-trap potential."""
    a_l, a_r = trap_centers(t, traj, pert)
    return localize_triple(a_l, a_r, p, grid, pert.gamma)


def tunneling_splitting(d: float, p: TrapParams = TrapParams(),
                        grid: Grid1D = DEFAULT_GRID) -> float:
    """Half the symmetric/antisymmetric splitting of a double well at
    center distance d; this is the tunneling Rabi frequency J."""
    if d <= 0:
        raise ValueError("trap distance must be positive")
    v = two_trap_potential(grid.x, d, p)
    energies, _ = stationary_states(v, grid, 2)
    return 0.5 * float(energies[1] - energies[0])


@dataclass(frozen=True)
class CouplingSchedule:
    """Sampled couplings and on-site energies; linear interpolation between
    samples is the contract for consumers."""

    t: np.ndarray
    j_lm: np.ndarray
    j_mr: np.ndarray
    mu: np.ndarray  # shape (len(t), 3), columns L, M, R

    @property
    def duration(self) -> float:
        return float(self.t[-1])

    def couplings_at(self, t: float) -> tuple[float, float]:
        return (float(np.interp(t, self.t, self.j_lm)),
                float(np.interp(t, self.t, self.j_mr)))

    def detunings_at(self, t: float) -> tuple[float, float]:
        """(delta_M, delta_R) = (mu_M - mu_L, mu_R - mu_L) at time t."""
        mu_l = np.interp(t, self.t, self.mu[:, 0])
        mu_m = np.interp(t, self.t, self.mu[:, 1])
        mu_r = np.interp(t, self.t, self.mu[:, 2])
        return float(mu_m - mu_l), float(mu_r - mu_l)


def coupling_schedule(traj: TrajectorySpec,
                      pert: PerturbationSpec = NO_PERTURBATION,
                      p: TrapParams = TrapParams(),
                      n_samples: int = 361,
                      grid: Grid1D = DEFAULT_GRID) -> CouplingSchedule:
    """Sample J_LM, J_MR and on-site energies over the trajectory.

    Couplings come from the two-trap tunneling splitting at the
    instantaneous pair distances (shaking shifts those distances); on-site
    energies from the localized basis of the full potential, so the tilt
    enters through them.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples")
    ts = np.linspace(0.0, traj.duration, n_samples)
    j_lm = np.empty(n_samples)
    j_mr = np.empty(n_samples)
    mu = np.empty((n_samples, 3))
    for i, t in enumerate(ts):
        a_l, a_r = trap_centers(t, traj, pert)
        j_lm[i] = tunneling_splitting(abs(a_l), p, grid)
        j_mr[i] = tunneling_splitting(abs(a_r), p, grid)
        basis = localize_composite(t, traj, pert, p, grid)
        mu[i] = basis.mu
    return CouplingSchedule(t=ts, j_lm=j_lm, j_mr=j_mr, mu=mu)
