"""Trap and waveguide potentials.

Everything downstream (stationary solvers, time propagation, waveguide runs)
gets its potential from here.  Dimensionless units throughout: hbar = m =
omega_x = 1, lengths in units of the single-trap ground-state size
1/alpha = sqrt(hbar/(m*omega_x)), energies in hbar*omega_x, times in
1/omega_x.

A single optical trap is a Gaussian well

    V_trap(x) = -V0 * exp(-x^2 / (2*V0)),

whose curvature at the bottom is exactly m*omega_x^2 = 1 for any depth V0.
Three such wells with movable outer centers are combined by a pointwise
minimum, so approaching traps never deepen each other; for
d^2/(8*V0) << 1 the result is three concatenated harmonic wells at
distance d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "TrapParams",
    "PairSchedule",
    "TrajectorySpec",
    "PerturbationSpec",
    "WaveguideGeometry",
    "gaussian_trap",
    "trap_centers",
    "composite_potential",
    "waveguide_potential",
]


@dataclass(frozen=True)
class TrapParams:
    """Single-trap parameters. The potential minimum sits at -V0."""

    V0: float = 100.0

    def __post_init__(self):
        if not self.V0 > 0:
            raise ValueError(f"trap depth V0 must be positive, got {self.V0}")

    def harmonic_defect(self, d: float) -> float:
        """Diagnostic ratio d^2/(8*V0).

        Must be << 1 for the min-composite of wells at center distance d
        to remain a concatenation of harmonic traps.
        """
        return d * d / (8.0 * self.V0)


def gaussian_trap(x, center: float, p: TrapParams):
    """Gaussian well of depth V0 centered at `center`, unit curvature."""
    u = np.asarray(x) - center
    return -p.V0 * np.exp(-u * u / (2.0 * p.V0))


@dataclass(frozen=True)
class PairSchedule:
    """Approach/hold/separate schedule for one trap pair (LM or MR).

    Distances are center-to-center in units of 1/alpha, times in 1/omega_x.
    """

    d_max: float = 9.0
    d_min: float = 1.5
    t_r: float = 300.0   # approach (and separation) ramp duration
    t_i: float = 0.0     # hold time at d_min

    def __post_init__(self):
        if not self.d_min < self.d_max:
            raise ValueError(f"need d_min < d_max, got {self.d_min} >= {self.d_max}")
        if self.d_min <= 0:
            raise ValueError("d_min must be positive")
        if not self.t_r > 0:
            raise ValueError("ramp duration t_r must be positive")
        if self.t_i < 0:
            raise ValueError("hold time t_i must be nonnegative")


def _ramp_shape(u: float, shape: str) -> float:
    """Monotone 0 -> 1 profile on u in [0, 1]."""
    if shape == "linear":
        return u
    if shape == "cosine":
        return 0.5 * (1.0 - math.cos(math.pi * u))
    raise ValueError(f"unknown ramp shape {shape!r}")


@dataclass(frozen=True)
class TrajectorySpec:
    """Time-dependent geometry of the three traps.

    The middle trap is pinned at x = 0; the outer traps move.  `order`
    selects which pair approaches first: "counterintuitive" couples the
    initially empty M-R pair before L-M, "intuitive" the reverse.  In
    "stirap" mode each pair runs its full approach/hold/separate sequence,
    the second pair delayed by t_delay; in "cpt" mode the approaches are
    ordered the same way but both pairs separate together (symmetric
    separation), which freezes the coupling ratio at 1.
    """

    lm: PairSchedule = field(default_factory=PairSchedule)
    mr: PairSchedule = field(default_factory=PairSchedule)
    t_delay: float = 120.0
    order: str = "counterintuitive"
    ramp: str = "cosine"  # smooth ramps keep the crossover adiabatic
    mode: str = "stirap"
    mr_sep_speedup: float = 0.0  # >0: MR separates faster (breaks CPT symmetry)

    def __post_init__(self):
        if self.order not in ("counterintuitive", "intuitive"):
            raise ValueError(f"unknown order {self.order!r}")
        if self.ramp not in ("linear", "cosine"):
            raise ValueError(f"unknown ramp shape {self.ramp!r}")
        if self.mode not in ("stirap", "cpt"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.t_delay < 0:
            raise ValueError("t_delay must be nonnegative")
        if self.mr_sep_speedup <= -1.0:
            raise ValueError("mr_sep_speedup must exceed -1")

    @classmethod
    def symmetric(cls, d_max=9.0, d_min=1.5, t_r=300.0, t_i=0.0, t_delay=120.0,
                  **kwargs) -> "TrajectorySpec":
        """Both pairs share one approach schedule (the common case)."""
        pair = PairSchedule(d_max=d_max, d_min=d_min, t_r=t_r, t_i=t_i)
        return cls(lm=pair, mr=pair, t_delay=t_delay, **kwargs)

    # -- timing ---------------------------------------------------------

    def _start(self, pair: str) -> float:
        first = "mr" if self.order == "counterintuitive" else "lm"
        return 0.0 if pair == first else self.t_delay

    def _sep_duration(self, pair: str) -> float:
        sched = self.lm if pair == "lm" else self.mr
        if pair == "mr":
            return sched.t_r / (1.0 + self.mr_sep_speedup)
        return sched.t_r

    def _sep_start(self, pair: str) -> float:
        sched = self.lm if pair == "lm" else self.mr
        if self.mode == "stirap":
            return self._start(pair) + sched.t_r + sched.t_i
        # cpt: joint separation once the later pair has approached and held
        later = "lm" if self._start("lm") >= self._start("mr") else "mr"
        later_sched = self.lm if later == "lm" else self.mr
        return self._start(later) + later_sched.t_r + later_sched.t_i

    @property
    def duration(self) -> float:
        """Time at which both pairs are back at d_max."""
        return max(self._sep_start(p) + self._sep_duration(p) for p in ("lm", "mr"))

    def pair_distance(self, t: float, pair: str) -> float:
        """Center distance of the given pair ("lm" or "mr") at time t."""
        sched = self.lm if pair == "lm" else self.mr
        t_app = self._start(pair)
        t_sep = self._sep_start(pair)
        sep_dur = self._sep_duration(pair)
        span = sched.d_max - sched.d_min
        if t < t_app:
            return sched.d_max
        if t < t_app + sched.t_r:
            return sched.d_max - span * _ramp_shape((t - t_app) / sched.t_r, self.ramp)
        if t < t_sep:
            return sched.d_min
        if t < t_sep + sep_dur:
            return sched.d_min + span * _ramp_shape((t - t_sep) / sep_dur, self.ramp)
        return sched.d_max


@dataclass(frozen=True)
class PerturbationSpec:
    """Static tilt plus periodic shaking of the outer trap centers.

    gamma is the slope of an additive ramp gamma*x in the potential
    (gravity misalignment); positive gamma raises the right trap.
    a_shake > 0 shakes both outer traps in phase, a_shake < 0 shakes them
    pi out of phase; the displacement amplitude is |a_shake|.
    """

    gamma: float = 0.0
    a_shake: float = 0.0
    omega_shake: float = 0.0

    def __post_init__(self):
        if self.omega_shake < 0:
            raise ValueError("omega_shake must be nonnegative")

    def shake_offsets(self, t: float) -> tuple[float, float]:
        """Center displacements (left, right) at time t."""
        if self.a_shake == 0.0 or self.omega_shake == 0.0:
            return 0.0, 0.0
        s = math.sin(self.omega_shake * t)
        return abs(self.a_shake) * s, self.a_shake * s


NO_PERTURBATION = PerturbationSpec()


def trap_centers(t: float, traj: TrajectorySpec,
                 pert: PerturbationSpec = NO_PERTURBATION) -> tuple[float, float]:
    """Outer trap centers (a_L, a_R) at time t; the middle trap sits at 0."""
    dl, dr = pert.shake_offsets(t)
    return -traj.pair_distance(t, "lm") + dl, traj.pair_distance(t, "mr") + dr


def triple_trap_potential(x, a_l: float, a_r: float,
                          p: TrapParams = TrapParams(), gamma: float = 0.0):
    """Static three-trap composite min(V_L, V_M, V_R) + gamma*x."""
    x = np.asarray(x)
    v = np.minimum(
        np.minimum(gaussian_trap(x, a_l, p), gaussian_trap(x, 0.0, p)),
        gaussian_trap(x, a_r, p),
    )
    if gamma != 0.0:
        v = v + gamma * x
    return v


def composite_potential(x, t: float, traj: TrajectorySpec,
                        pert: PerturbationSpec = NO_PERTURBATION,
                        p: TrapParams = TrapParams()):
    """Three-trap potential min(V_L, V_M, V_R) + gamma*x at time t."""
    a_l, a_r = trap_centers(t, traj, pert)
    return triple_trap_potential(x, a_l, a_r, p, pert.gamma)


def two_trap_potential(x, d: float, p: TrapParams = TrapParams()):
    """Symmetric double well: min of Gaussians centered at +-d/2."""
    x = np.asarray(x)
    return np.minimum(gaussian_trap(x, -0.5 * d, p), gaussian_trap(x, 0.5 * d, p))


@dataclass(frozen=True)
class WaveguideGeometry:
    """Three waveguides along y whose transverse centers follow x_alpha(y).

    Reuses the trajectory grammar with the time argument replaced by
    y - y0, so ramp "durations" are lengths along the guide.
    """

    traj: TrajectorySpec
    y0: float = 0.0

    @property
    def y_end(self) -> float:
        return self.y0 + self.traj.duration

    def centers(self, y) -> tuple[np.ndarray, np.ndarray]:
        """Outer guide centers (x_L, x_R) at longitudinal position(s) y."""
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        xl = np.empty_like(ys)
        xr = np.empty_like(ys)
        for i, yi in enumerate(ys):
            xl[i] = -self.traj.pair_distance(yi - self.y0, "lm")
            xr[i] = self.traj.pair_distance(yi - self.y0, "mr")
        return xl, xr


def waveguide_potential(x, y, geom: WaveguideGeometry,
                        p: TrapParams = TrapParams()):
    """V(x, y) for the guide structure; broadcasts x against y.

    For a full 2D grid pass x with shape (nx, 1) and y with shape (ny,).
    """
    x = np.asarray(x, dtype=float)
    xl, xr = geom.centers(y)
    v = np.minimum(
        np.minimum(gaussian_trap(x, 0.0, p), -p.V0 * np.exp(-((x - xl) ** 2) / (2 * p.V0))),
        -p.V0 * np.exp(-((x - xr) ** 2) / (2 * p.V0)),
    )
    return v
