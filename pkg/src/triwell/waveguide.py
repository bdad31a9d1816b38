"""Wave-packet propagation through a three-guide splitting structure.

The temporal approach sequences of the trap module become spatial ones: a
packet with mean longitudinal momentum <k_y> rides along the left guide
of a structure whose guide separations vary with y (counterintuitive
approach order, symmetric separation for a CPT-like split).  Two methods
are implemented and cross-checked:

* full 2D split-step integration of H = (p_x^2 + p_y^2)/2 + V(x, y), with
  smooth imaginary absorbing margins at the y ends of the box (strictly
  outside the classification regions; absorbed probability is attributed
  to an exit arm as it is removed, so exit fractions account for all of
  the norm);

* the coupled-channel reduction: expanding psi = sum_a c_a(y, t)
  phi_a(x; y) over the localized transverse modes of each y slice gives

      i dc_a/dt = -1/2 c_a'' + sum_b [(H_ab + 1/2 P_ab) c_b + K_ab c_b'],

  with H the transverse Hamiltonian matrix elements,
  K_ab = -<phi_a|d_y phi_b> and P_ab = -<phi_a|d_y^2 phi_b>.  With these
  coefficients the generator is Hermitian (P supplies the K' term that
  symmetrizes K d_y), so the channel evolution conserves norm.  The
  first-derivative coupling K c' is how the splitting becomes velocity
  dependent.

The channel solver splits the diagonal kinetic term (exact in k-space)
from the coupling terms, which are integrated with classic RK4; coupling
norms times dt are ~1e-2 here, so the RK4 amplitude defect stays below
1e-10 over a full run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np
import scipy.fft as sfft

from .errors import BoundaryBreachError, NormDriftError
from .potentials import TrajectorySpec, TrapParams, WaveguideGeometry, waveguide_potential
from .spectral import Grid1D, localized_basis, stationary_states

__all__ = [
    "WavePacketSpec",
    "ExitFractions",
    "Grid2D",
    "ChannelTables",
    "cpt_guide_geometry",
    "propagate_2d",
    "mode_decomposition",
    "propagate_channels",
]

OMEGA_R = 1.0 / 6.0  # longitudinal reference frequency, fixes k_r


def k_r() -> float:
    """Reference momentum sqrt(2*omega_r) ~ 0.577 (units of alpha)."""
    return sqrt(2.0 * OMEGA_R)


@dataclass(frozen=True)
class WavePacketSpec:
    """Longitudinal Gaussian packet, transverse ground mode of the entry guide.

    Momenta are quoted in units of k_r; spreads are standard deviations of
    the momentum distribution.
    """

    k_mean: float = 3.5
    k_spread: float = 1.0
    y_start: float = -10.0

    def __post_init__(self):
        if self.k_mean <= 0 or self.k_spread <= 0:
            raise ValueError("need positive mean momentum and spread")

    @property
    def k_mean_abs(self) -> float:
        return self.k_mean * k_r()

    @property
    def k_spread_abs(self) -> float:
        return self.k_spread * k_r()

    @property
    def sigma_y(self) -> float:
        return 1.0 / (2.0 * self.k_spread_abs)

    def profile(self, y: np.ndarray) -> np.ndarray:
        """Unit-norm longitudinal amplitude on the grid y."""
        chi = np.exp(-((y - self.y_start) ** 2) / (4 * self.sigma_y**2)
                     + 1j * self.k_mean_abs * y)
        return chi / np.sqrt(np.sum(np.abs(chi) ** 2) * (y[1] - y[0]))


@dataclass(frozen=True)
class ExitFractions:
    f_L: float
    f_M: float
    f_R: float
    f_reflected: float

    @property
    def total(self) -> float:
        return self.f_L + self.f_M + self.f_R + self.f_reflected

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.f_L, self.f_M, self.f_R, self.f_reflected)


@dataclass(frozen=True)
class Grid2D:
    """Tensor grid: x transverse, y longitudinal."""

    x: Grid1D = field(default_factory=lambda: Grid1D(-16.0, 16.0, 256))
    y: Grid1D = field(default_factory=lambda: Grid1D(-64.0, 448.0, 4096))


def cpt_guide_geometry(d_min: float = 1.5, d_max: float = 9.0,
                       ramp_len: float = 90.0, delay_len: float = 36.0,
                       hold_len: float = 0.0, y0: float = 0.0,
                       order: str = "counterintuitive") -> WaveguideGeometry:
    """Splitting structure: staggered approach, symmetric separation."""
    traj = TrajectorySpec.symmetric(d_max=d_max, d_min=d_min, t_r=ramp_len,
                                    t_i=hold_len, t_delay=delay_len,
                                    mode="cpt", ramp="cosine", order=order)
    return WaveguideGeometry(traj=traj, y0=y0)


def entry_mode(geom: WaveguideGeometry, grid_x: Grid1D, p: TrapParams,
               y: float, which: int = 0) -> np.ndarray:
    """Localized transverse orbital `which` (0=L, 1=M, 2=R) at slice y."""
    xl, xr = geom.centers(y)
    v = waveguide_potential(grid_x.x, float(y), geom, p)
    energies, states = stationary_states(v, grid_x, 3)
    basis = localized_basis(energies, states, (float(xl[0]), 0.0, float(xr[0])),
                            grid_x)
    return basis.phi[which]


def _absorber_profile(y: np.ndarray, y_lo: float, y_hi: float,
                      width: float, strength: float) -> np.ndarray:
    """Smooth imaginary-potential ramp W(y) >= 0 outside [y_lo, y_hi]."""
    w = np.zeros_like(y)
    lo = y < y_lo
    hi = y > y_hi
    w[lo] = strength * np.sin(0.5 * np.pi * np.minimum((y_lo - y[lo]) / width, 1.0)) ** 2
    w[hi] = strength * np.sin(0.5 * np.pi * np.minimum((y[hi] - y_hi) / width, 1.0)) ** 2
    return w


def propagate_2d(geom: WaveguideGeometry,
                 packet: WavePacketSpec = WavePacketSpec(),
                 p: TrapParams = TrapParams(),
                 grid: Grid2D = Grid2D(),
                 dt: float = 0.01,
                 t_end: float | None = None,
                 absorber_width: float = 40.0,
                 absorber_strength: float = 1.5,
                 norm_tol: float = 1e-6,
                 return_field: bool = False,
                 entry: int = 0):
    """Full 2D split-step run; returns (ExitFractions, info dict).

    The run lasts until the packet center would sit `t_end * <v>` past the
    structure (default: 30 ground-state widths past the exit, plus 20%).
    Probability removed by the absorbing margins is attributed to an arm
    (top margin, x-classified) or to reflection (bottom margin) as it is
    absorbed; remaining probability is classified by position at the end.
    """
    gx, gy = grid.x, grid.y
    x = gx.x
    y = gy.x
    if packet.y_start - 3 * packet.sigma_y < gy.x_min + absorber_width:
        raise ValueError("packet starts inside the lower absorbing margin")
    if geom.y_end > gy.x_max - absorber_width - 20:
        raise ValueError("guide structure extends into the upper absorbing margin")
    if t_end is None:
        t_end = 1.2 * (geom.y_end + 30.0 - packet.y_start) / packet.k_mean_abs
    # resolution check: shortest relevant wavelength vs grid
    k_fast = packet.k_mean_abs + 3 * packet.k_spread_abs
    if k_fast > 0.6 * np.pi / gy.dx:
        raise ValueError("longitudinal grid does not resolve the fast tail")

    v = waveguide_potential(x[:, None], y, geom, p)
    phi0 = entry_mode(geom, gx, p, float(y[0]), which=entry)
    psi = (phi0[:, None] * packet.profile(y)[None, :]).astype(complex)
    norm0 = sqrt(float(np.sum(np.abs(psi) ** 2)) * gx.dx * gy.dx)
    psi /= norm0

    w_abs = _absorber_profile(y, gy.x_min + absorber_width,
                              gy.x_max - absorber_width,
                              absorber_width, absorber_strength)
    kx = gx.k
    ky = gy.k
    kfac = np.exp(-0.5j * dt * (kx[:, None] ** 2 + ky[None, :] ** 2))
    vfac = np.exp(-1j * dt * v) * np.exp(-dt * w_abs)[None, :]
    vfac_half = np.exp(-0.5j * dt * v) * np.exp(-0.5 * dt * w_abs)[None, :]

    # classification: arms by x at the exit separation, reflection by y sign
    d_exit = geom.traj.lm.d_max
    i_l = int(np.searchsorted(x, -0.5 * d_exit))
    i_r = int(np.searchsorted(x, 0.5 * d_exit, side="right"))
    x_cut_l = x < -0.5 * d_exit
    x_cut_m = (x >= -0.5 * d_exit) & (x <= 0.5 * d_exit)
    x_cut_r = x > 0.5 * d_exit
    absorbing = w_abs > 0
    top = absorbing & (y > 0)
    bottom = absorbing & (y <= 0)
    j_top = int(np.argmax(top)) if top.any() else gy.n
    j_bot = int(gy.n - np.argmax(bottom[::-1])) if bottom.any() else 0
    loss_full = 1.0 - np.exp(-2 * dt * w_abs)
    loss_half = 1.0 - np.exp(-dt * w_abs)
    absorbed = np.zeros(4)  # L, M, R, reflected
    meas = gx.dx * gy.dx

    def absorb_tally(before_sq, loss_frac):
        """Attribute the probability removed by one damping factor."""
        lf_top = loss_frac[j_top:]
        absorbed[0] += float((before_sq[:i_l, j_top:] @ lf_top).sum()) * meas
        absorbed[1] += float((before_sq[i_l:i_r, j_top:] @ lf_top).sum()) * meas
        absorbed[2] += float((before_sq[i_r:, j_top:] @ lf_top).sum()) * meas
        lf_bot = loss_frac[:j_bot]
        absorbed[3] += float((before_sq[:, :j_bot] @ lf_bot).sum()) * meas

    n_steps = max(1, int(round(t_end / dt)))
    any_absorber = bool(np.any(absorbing))
    edge = np.zeros(gy.n, dtype=bool)
    edge[:2] = edge[-2:] = True
    if any_absorber:
        absorb_tally(np.abs(psi) ** 2, loss_half)
    psi *= vfac_half
    for i in range(n_steps):
        psi = sfft.ifft2(kfac * sfft.fft2(psi))
        last = i == n_steps - 1
        if any_absorber:
            absorb_tally(np.abs(psi) ** 2, loss_half if last else loss_full)
        psi *= vfac_half if last else vfac
        if (i + 1) % 200 == 0 or last:
            tail = float(np.sum(np.abs(psi[:, edge]) ** 2)) * meas
            if not tail <= 1e-8:
                raise BoundaryBreachError(
                    f"probability {tail:.2e} at the y boundary at step {i + 1}")
            norm = float(np.sum(np.abs(psi) ** 2)) * meas
            if not abs(norm + absorbed.sum() - 1.0) <= norm_tol:
                raise NormDriftError(
                    f"norm accounting off by {norm + absorbed.sum() - 1.0:.2e}")

    sq = np.abs(psi) ** 2
    fwd = y >= 0
    f_l = float(sq[np.ix_(x_cut_l, fwd)].sum()) * meas + absorbed[0]
    f_m = float(sq[np.ix_(x_cut_m, fwd)].sum()) * meas + absorbed[1]
    f_r = float(sq[np.ix_(x_cut_r, fwd)].sum()) * meas + absorbed[2]
    f_b = float(sq[:, ~fwd].sum()) * meas + absorbed[3]
    fr = ExitFractions(f_L=f_l, f_M=f_m, f_R=f_r, f_reflected=f_b)
    info = {"t_end": t_end, "absorbed": absorbed.sum(),
            "final_norm": float(sq.sum()) * meas}
    if return_field:
        info["psi"] = psi
        info["grid"] = grid
    return fr, info


@dataclass(frozen=True)
class ChannelTables:
    """H, K, P matrices sampled along y, plus the sampled modes."""

    y: np.ndarray
    h: np.ndarray    # (m, 3, 3) transverse Hamiltonian matrix elements
    k: np.ndarray    # (m, 3, 3) first-derivative couplings
    p_: np.ndarray   # (m, 3, 3) second-derivative couplings
    e_ref: float     # entry-guide transverse energy, used as phase reference

    def interp(self, y: np.ndarray):
        """Tables linearly interpolated onto the solver grid."""
        out = []
        for table in (self.h, self.k, self.p_):
            m = np.empty((len(y), 3, 3))
            for a in range(3):
                for b in range(3):
                    m[:, a, b] = np.interp(y, self.y, table[:, a, b])
            out.append(m)
        return out


def mode_decomposition(geom: WaveguideGeometry,
                       p: TrapParams = TrapParams(),
                       grid_x: Grid1D | None = None,
                       dy: float = 0.1,
                       pad: float = 10.0) -> ChannelTables:
    """Transverse-mode tables along the guide structure.

    Modes are localized per slice with the deterministic center-positive
    sign convention, which keeps them continuous in y; K and P come from
    centered differences at the sampling resolution.  Outside the sampled
    window the guides are straight: K = P = 0 and H is constant, which is
    how consumers should extrapolate.
    """
    if grid_x is None:
        grid_x = Grid1D(-16.0, 16.0, 256)
    ys = np.arange(geom.y0 - pad, geom.y_end + pad + dy, dy)
    m = len(ys)
    phis = np.empty((m, 3, grid_x.n))
    h = np.empty((m, 3, 3))
    x = grid_x.x
    for i, yi in enumerate(ys):
        xl, xr = geom.centers(yi)
        v = waveguide_potential(x, float(yi), geom, p)
        energies, states = stationary_states(v, grid_x, 3)
        basis = localized_basis(energies, states,
                                (float(xl[0]), 0.0, float(xr[0])), grid_x)
        phis[i] = basis.phi
        h[i] = -basis.J  # plain matrix elements; diagonal is mu
    k = np.zeros((m, 3, 3))
    p_ = np.zeros((m, 3, 3))
    inv4dy = 1.0 / (4 * dy)
    invdy2 = 1.0 / dy**2
    for i in range(1, m - 1):
        # skew form of the centered difference: second-order accurate and
        # exactly antisymmetric (differentiated orthonormality) at any dy
        cross = phis[i - 1] @ phis[i + 1].T
        k[i] = -(cross - cross.T) * (grid_x.dx * inv4dy)
        d2phi = (phis[i + 1] - 2 * phis[i] + phis[i - 1]) * invdy2
        p_[i] = -(phis[i] @ d2phi.T) * grid_x.dx
    e_ref = float(h[0, 0, 0])
    return ChannelTables(y=ys, h=h, k=k, p_=p_, e_ref=e_ref)


def propagate_channels(tables: ChannelTables,
                       packet: WavePacketSpec = WavePacketSpec(),
                       grid_y: Grid1D | None = None,
                       dt: float = 0.01,
                       t_end: float | None = None,
                       absorber_width: float = 40.0,
                       absorber_strength: float = 1.5,
                       norm_tol: float = 1e-6,
                       entry: int = 0):
    """Integrate the coupled-channel equations; returns (ExitFractions, info).

    Kinetic term exact in momentum space (Strang split); the y-local
    coupling matrix (H + G/2, referenced to the entry energy) and the
    K d_y + K'/2 transport coupling advance with RK4, derivatives
    evaluated spectrally.  The same absorbing margins as the 2D method
    remove the packet as it leaves; probability absorbed in channel a at
    the far end is attributed to exit arm a, at the near end to
    reflection, so the fractions account for the whole norm.
    """
    if grid_y is None:
        grid_y = Grid1D(-64.0, 448.0, 4096)
    y = grid_y.x
    ky = grid_y.k
    if t_end is None:
        t_end = 1.2 * (tables.y[-1] + 30.0 - packet.y_start) / packet.k_mean_abs
    h, k, p_ = tables.interp(y)
    # Split the generator into manifestly Hermitian pieces: the local part
    # uses G = P - K' (symmetric up to table noise, so symmetrize), and the
    # transport part K d_y + K'/2 uses the spectral derivative of the same
    # K it applies, keeping the discrete operator Hermitian even where the
    # finite-difference tables carry O(dy^2) inconsistencies.
    k = 0.5 * (k - np.transpose(k, (0, 2, 1)))
    k_prime = sfft.ifft(1j * ky[:, None, None]
                        * sfft.fft(k, axis=0), axis=0).real
    g_loc = p_ - k_prime
    hloc = 0.5 * (h + np.transpose(h, (0, 2, 1))) + 0.25 * (
        g_loc + np.transpose(g_loc, (0, 2, 1)))
    for a in range(3):
        hloc[:, a, a] -= tables.e_ref
    # fold the K'/2 transport completion into the local coefficients; the
    # combined operator (S + K'/2) + K d_y stays Hermitian
    hloc = hloc + 0.5 * k_prime
    coupling_scale = float(np.abs(hloc).sum(axis=(1, 2)).max()
                           + np.abs(k).sum(axis=(1, 2)).max()
                           * (packet.k_mean_abs + 3 * packet.k_spread_abs))
    if dt * coupling_scale > 0.5:
        raise ValueError(
            f"dt too large for the coupling strength ({dt * coupling_scale:.2f})")
    # unpack the 3x3 structure into flat coefficient arrays; K is
    # antisymmetric so only three independent components remain
    hl = [[np.ascontiguousarray(hloc[:, a, b]) for b in range(3)]
          for a in range(3)]
    k01 = np.ascontiguousarray(k[:, 0, 1])
    k02 = np.ascontiguousarray(k[:, 0, 2])
    k12 = np.ascontiguousarray(k[:, 1, 2])

    c = np.zeros((3, grid_y.n), dtype=complex)
    c[entry] = packet.profile(y)

    kfac_half = np.exp(-0.25j * dt * ky**2)
    w_abs = _absorber_profile(y, grid_y.x_min + absorber_width,
                              grid_y.x_max - absorber_width,
                              absorber_width, absorber_strength)
    any_absorber = bool(np.any(w_abs > 0))
    damp = np.exp(-dt * w_abs)
    loss = (1.0 - damp**2) * grid_y.dx
    top = (w_abs > 0) & (y > 0)
    bottom = (w_abs > 0) & (y <= 0)
    absorbed = np.zeros(4)  # L, M, R, reflected

    def rhs(cs: np.ndarray) -> np.ndarray:
        d = sfft.ifft((1j * ky) * sfft.fft(cs, axis=1), axis=1)
        out = np.empty_like(cs)
        out[0] = hl[0][0] * cs[0] + hl[0][1] * cs[1] + hl[0][2] * cs[2] \
            + k01 * d[1] + k02 * d[2]
        out[1] = hl[1][0] * cs[0] + hl[1][1] * cs[1] + hl[1][2] * cs[2] \
            - k01 * d[0] + k12 * d[2]
        out[2] = hl[2][0] * cs[0] + hl[2][1] * cs[1] + hl[2][2] * cs[2] \
            - k02 * d[0] - k12 * d[1]
        out *= -1j
        return out

    n_steps = max(1, int(round(t_end / dt)))
    norm0 = float(np.sum(np.abs(c) ** 2) * grid_y.dx)
    for i in range(n_steps):
        c = sfft.ifft(kfac_half * sfft.fft(c, axis=1), axis=1)
        k1 = rhs(c)
        k2 = rhs(c + 0.5 * dt * k1)
        k3 = rhs(c + 0.5 * dt * k2)
        k4 = rhs(c + dt * k3)
        c = c + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        c = sfft.ifft(kfac_half * sfft.fft(c, axis=1), axis=1)
        if any_absorber:
            sq = np.abs(c) ** 2
            for a in range(3):
                absorbed[a] += float(np.sum(sq[a][top] * loss[top]))
                absorbed[3] += float(np.sum(sq[a][bottom] * loss[bottom]))
            c *= damp
        if (i + 1) % 500 == 0 or i == n_steps - 1:
            norm = float(np.sum(np.abs(c) ** 2) * grid_y.dx)
            if not abs(norm + absorbed.sum() - norm0) <= norm_tol:
                raise NormDriftError(
                    f"channel norm accounting off by "
                    f"{norm + absorbed.sum() - norm0:.2e}")

    fwd = y >= 0
    dx = grid_y.dx
    pops_fwd = [float(np.sum(np.abs(c[a][fwd]) ** 2) * dx) + absorbed[a]
                for a in range(3)]
    refl = float(np.sum(np.abs(c[:, ~fwd]) ** 2) * dx) + absorbed[3]
    fr = ExitFractions(f_L=pops_fwd[0], f_M=pops_fwd[1], f_R=pops_fwd[2],
                       f_reflected=refl)
    return fr, {"t_end": t_end, "c": c, "y": y,
                "absorbed": float(absorbed.sum())}
