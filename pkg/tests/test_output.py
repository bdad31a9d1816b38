import numpy as np
import pytest

from triwell.output import (
    format_float,
    read_snapshot,
    write_coupling_csv,
    write_exit_csv,
    write_history_csv,
    write_hole_csv,
    write_snapshot_1d,
    write_snapshot_2d,
)
from triwell.spectral import Grid1D
from triwell.waveguide import ExitFractions


class DummyRun:
    def __init__(self, n_sites):
        self.t = np.array([0.0, 1.0, 2.0])
        self.populations = np.linspace(0, 1, 3 * n_sites).reshape(3, n_sites)
        self.excited = np.array([0.0, 0.001, 0.002])


class DummySchedule:
    t = np.array([0.0, 1.0])
    j_lm = np.array([0.1, 0.2])
    j_mr = np.array([0.3, 0.4])
    mu = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])


class DummyHole:
    t = np.array([0.0, 1.0])
    holes = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])


class TestCsvWriters:
    def test_history_header_three_site(self, tmp_path):
        path = tmp_path / "h.csv"
        write_history_csv(path, DummyRun(3))
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "t,rho_L,rho_M,rho_R,excited_fraction"
        assert len(lines) == 4

    def test_history_header_two_site(self, tmp_path):
        path = tmp_path / "h.csv"
        write_history_csv(path, DummyRun(2))
        assert path.read_text().startswith("t,rho_L,rho_R,excited_fraction")

    def test_coupling_column_order(self, tmp_path):
        path = tmp_path / "c.csv"
        write_coupling_csv(path, DummySchedule())
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "t,J_LM,J_MR,mu_L,mu_M,mu_R"
        assert lines[1] == "0,0.1,0.3,1,2,3"

    def test_hole_csv(self, tmp_path):
        path = tmp_path / "hole.csv"
        write_hole_csv(path, DummyHole())
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "t,h_L,h_M,h_R"

    def test_exit_csv(self, tmp_path):
        path = tmp_path / "exit.csv"
        rows = [(1.5, ExitFractions(0.4, 0.1, 0.45, 0.05))]
        write_exit_csv(path, rows, parameter_name="d_min")
        text = path.read_text()
        assert "d_min,f_L,f_M,f_R,f_reflected" in text
        assert "1.5,0.4,0.1,0.45,0.05" in text

    def test_float_format_is_deterministic(self):
        assert format_float(0.1 + 0.2) == format_float(0.30000000000000004)
        assert format_float(1.0) == "1"


class TestSnapshots:
    def test_roundtrip_1d(self, tmp_path):
        grid = Grid1D(-16.0, 16.0, 256)
        psi = np.exp(1j * grid.x) / np.sqrt(32.0)
        path = tmp_path / "field.twf"
        write_snapshot_1d(path, psi, grid, t=12.5)
        back, meta = read_snapshot(path)
        np.testing.assert_array_equal(back, psi)
        assert meta["kind"] == "1d"
        assert meta["t"] == 12.5
        assert meta["x_min"] == -16.0

    def test_roundtrip_2d(self, tmp_path):
        gx = Grid1D(-8.0, 8.0, 128)
        gy = Grid1D(-8.0, 8.0, 256)
        rng = np.random.default_rng(7)
        psi = rng.normal(size=(128, 256)) + 1j * rng.normal(size=(128, 256))
        path = tmp_path / "field2.twf"
        write_snapshot_2d(path, psi, gx, gy, t=3.0)
        back, meta = read_snapshot(path)
        np.testing.assert_array_equal(back, psi)
        assert meta["kind"] == "2d"
        assert (meta["nx"], meta["ny"]) == (128, 256)

    def test_little_endian_layout(self, tmp_path):
        # first payload bytes are re/im of the first sample as <f8 pairs
        grid = Grid1D(-16.0, 16.0, 256)
        psi = np.zeros(256, dtype=complex)
        psi[0] = 1.25 - 0.5j
        path = tmp_path / "field.twf"
        write_snapshot_1d(path, psi, grid, t=0.0)
        raw = path.read_bytes()
        header = 4 + 4 + 8 + 24
        assert raw[:4] == b"TWF1"
        assert np.frombuffer(raw[header:header + 16], dtype="<f8").tolist() \
            == [1.25, -0.5]

    def test_rejects_garbage(self, tmp_path):
        path = tmp_path / "nope.twf"
        path.write_bytes(b"NOPE" + b"\x00" * 64)
        with pytest.raises(ValueError):
            read_snapshot(path)
