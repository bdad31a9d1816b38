import numpy as np
import pytest

from triwell.potentials import TrajectorySpec, WaveguideGeometry, waveguide_potential
from triwell.spectral import Grid1D
from triwell.waveguide import (
    ChannelTables,
    ExitFractions,
    Grid2D,
    WavePacketSpec,
    cpt_guide_geometry,
    entry_mode,
    k_r,
    mode_decomposition,
    propagate_2d,
    propagate_channels,
)


class TestPacketSpec:
    def test_reference_momentum(self):
        # omega_r = omega_x/6 -> k_r = sqrt(1/3)
        assert k_r() == pytest.approx(np.sqrt(1.0 / 3.0), rel=1e-12)
        assert k_r() == pytest.approx(0.5774, abs=1e-4)

    def test_validation(self):
        with pytest.raises(ValueError):
            WavePacketSpec(k_mean=0.0)
        with pytest.raises(ValueError):
            WavePacketSpec(k_spread=-1.0)

    def test_profile_norm_and_spread(self):
        grid = Grid1D(-64.0, 448.0, 4096)
        pkt = WavePacketSpec()
        chi = pkt.profile(grid.x)
        dy = grid.dx
        assert np.sum(np.abs(chi) ** 2) * dy == pytest.approx(1.0, abs=1e-12)
        # momentum spread equals k_spread * k_r
        ck = np.fft.fft(chi)
        k = grid.k
        w = np.abs(ck) ** 2
        kbar = np.sum(k * w) / np.sum(w)
        spread = np.sqrt(np.sum((k - kbar) ** 2 * w) / np.sum(w))
        assert kbar == pytest.approx(pkt.k_mean_abs, rel=1e-6)
        assert spread == pytest.approx(pkt.k_spread_abs, rel=1e-3)


class TestGeometry:
    def test_straight_region_matches_static_triple(self):
        geom = cpt_guide_geometry()
        x = np.linspace(-14, 14, 201)
        v = waveguide_potential(x, -20.0, geom, )
        from triwell.potentials import triple_trap_potential
        np.testing.assert_allclose(v, triple_trap_potential(x, -9.0, 9.0),
                                   atol=1e-12)

    def test_symmetric_after_merge(self):
        geom = cpt_guide_geometry()
        x = np.linspace(-14, 14, 201)
        # past the joint separation the structure is mirror symmetric
        for y in (geom.y_end - 30.0, geom.y_end + 10.0):
            v = waveguide_potential(x, y, geom)
            np.testing.assert_allclose(v, v[::-1], atol=1e-12)

    def test_minimal_distance_reached(self):
        geom = cpt_guide_geometry(d_min=1.5, ramp_len=90.0, delay_len=36.0)
        # LM approach ends (and the joint hold sits) at y = delay + ramp
        xl, xr = geom.centers(np.array([36.0 + 90.0]))
        assert abs(xl[0]) == pytest.approx(1.5, abs=1e-12)
        assert xr[0] == pytest.approx(1.5, abs=1e-12)
        ys = np.linspace(geom.y0, geom.y_end, 400)
        xl_all, xr_all = geom.centers(ys)
        assert np.abs(xl_all).min() >= 1.5 - 1e-12
        assert xr_all.min() >= 1.5 - 1e-12


class TestModeDecomposition:
    @pytest.fixture(scope="class")
    def straight_tables(self):
        traj = TrajectorySpec.symmetric(d_max=9.0, d_min=8.99999,
                                        t_r=50.0, t_delay=0.0)
        geom = WaveguideGeometry(traj=traj)
        return mode_decomposition(geom, dy=0.25, pad=5.0)

    def test_straight_guides_no_coupling(self, straight_tables):
        assert np.abs(straight_tables.k).max() <= 1e-8
        assert np.abs(straight_tables.p_).max() <= 1e-6

    def test_k_antisymmetry(self):
        geom = cpt_guide_geometry()
        tables = mode_decomposition(geom, dy=0.05, pad=2.0)
        resid = np.abs(tables.k + np.transpose(tables.k, (0, 2, 1))).max()
        assert resid <= 1e-6

    def test_coupling_pulse_ordering(self):
        geom = cpt_guide_geometry()
        tables = mode_decomposition(geom, dy=0.2)
        y_mr = tables.y[np.argmax(np.abs(tables.k[:, 1, 2]))]
        y_lm = tables.y[np.argmax(np.abs(tables.k[:, 0, 1]))]
        assert y_mr < y_lm   # MR coupling pulse comes first

    def test_h_diagonal_is_transverse_energy(self, straight_tables):
        # straight guides: H diagonal constant along y, degenerate sites
        h = straight_tables.h
        assert np.ptp(h[:, 0, 0]) <= 1e-9
        assert h[0, 0, 0] == pytest.approx(h[0, 1, 1], abs=1e-8)


class TestChannels:
    def test_decoupled_free_propagation(self):
        # K = P = 0 and diagonal H: three independent channels, norms
        # conserved individually
        grid_y = Grid1D(-64.0, 192.0, 2048)
        m = 41
        ys = np.linspace(-20.0, 20.0, m)
        h = np.zeros((m, 3, 3))
        for a in range(3):
            h[:, a, a] = -99.5
        tables = ChannelTables(y=ys, h=h, k=np.zeros((m, 3, 3)),
                               p_=np.zeros((m, 3, 3)), e_ref=-99.5)
        pkt = WavePacketSpec(y_start=-10.0)
        fr, info = propagate_channels(tables, pkt, grid_y, dt=0.01, t_end=20.0,
                                      absorber_strength=0.0)
        c = info["c"]
        dy = grid_y.dx
        assert np.sum(np.abs(c[0]) ** 2) * dy == pytest.approx(1.0, abs=1e-8)
        assert np.sum(np.abs(c[1]) ** 2) * dy <= 1e-12
        assert np.sum(np.abs(c[2]) ** 2) * dy <= 1e-12

    def test_longitudinal_broadening(self):
        grid_y = Grid1D(-64.0, 192.0, 2048)
        m = 11
        ys = np.linspace(-20.0, 20.0, m)
        h = np.zeros((m, 3, 3))
        tables = ChannelTables(y=ys, h=h, k=np.zeros((m, 3, 3)),
                               p_=np.zeros((m, 3, 3)), e_ref=0.0)
        pkt = WavePacketSpec(y_start=-10.0)
        y = grid_y.x

        def width(c):
            w = np.abs(c[0]) ** 2
            mean = np.sum(y * w) / np.sum(w)
            return np.sqrt(np.sum((y - mean) ** 2 * w) / np.sum(w))

        _, info0 = propagate_channels(tables, pkt, grid_y, dt=0.01, t_end=0.1)
        _, info1 = propagate_channels(tables, pkt, grid_y, dt=0.01, t_end=30.0)
        assert width(info1["c"]) > 2.0 * width(info0["c"])

    def test_middle_entry_splits_symmetrically(self):
        # x-mirror-symmetric structure (no delay): packet entering the
        # middle guide exits with f_L = f_R
        geom = cpt_guide_geometry(delay_len=0.0, ramp_len=60.0)
        tables = mode_decomposition(geom, dy=0.2)
        fr, _ = propagate_channels(tables, WavePacketSpec(), entry=1)
        assert abs(fr.f_L - fr.f_R) <= 1e-3

    def test_cfl_guard(self):
        geom = cpt_guide_geometry(ramp_len=30.0, delay_len=10.0)
        tables = mode_decomposition(geom, dy=0.5)
        with pytest.raises(ValueError):
            propagate_channels(tables, WavePacketSpec(), dt=3.0)


class TestPropagate2D:
    def test_straight_guide_preserves_transverse_mode(self):
        # short run in a straight structure: packet stays in its guide's
        # transverse ground mode
        traj = TrajectorySpec.symmetric(d_max=9.0, d_min=8.99999,
                                        t_r=50.0, t_delay=0.0)
        geom = WaveguideGeometry(traj=traj)
        grid = Grid2D(x=Grid1D(-16.0, 16.0, 256),
                      y=Grid1D(-64.0, 192.0, 2048))
        pkt = WavePacketSpec(y_start=-10.0)
        fr, info = propagate_2d(geom, pkt, grid=grid, dt=0.01, t_end=25.0,
                                return_field=True)
        psi = info["psi"]
        phi = entry_mode(geom, grid.x, __import__("triwell").TrapParams(),
                         -20.0, which=0)
        # project each y column on the transverse mode
        amp = phi @ psi * grid.x.dx
        mode_pop = float(np.sum(np.abs(amp) ** 2) * grid.y.dx)
        total = float(np.sum(np.abs(psi) ** 2) * grid.x.dx * grid.y.dx)
        assert mode_pop / total >= 0.999
        assert fr.f_L >= 0.99

    def test_exit_fractions_sum(self):
        fr = ExitFractions(0.4, 0.1, 0.45, 0.05)
        assert fr.total == pytest.approx(1.0)

    def test_packet_in_lower_absorber_rejected(self):
        geom = cpt_guide_geometry()
        with pytest.raises(ValueError):
            propagate_2d(geom, WavePacketSpec(y_start=-60.0))

    def test_boundary_breach_raises(self):
        # no absorber on a short box: the packet front reaches the far end
        from triwell.errors import BoundaryBreachError
        traj = TrajectorySpec.symmetric(d_max=9.0, d_min=8.99999,
                                        t_r=20.0, t_delay=0.0)
        geom = WaveguideGeometry(traj=traj)
        grid = Grid2D(x=Grid1D(-16.0, 16.0, 256),
                      y=Grid1D(-64.0, 64.0, 1024))
        with pytest.raises(BoundaryBreachError):
            propagate_2d(geom, WavePacketSpec(y_start=-10.0), grid=grid,
                         dt=0.01, t_end=45.0, absorber_strength=0.0)

    def test_structure_must_fit_grid(self):
        geom = cpt_guide_geometry(ramp_len=300.0, delay_len=100.0)
        with pytest.raises(ValueError):
            propagate_2d(geom, WavePacketSpec())
