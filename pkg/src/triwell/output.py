"""CSV histories and binary field snapshots.

CSV files use a fixed column order per run type (documented in README)
and deterministic float formatting, so identical configurations produce
byte-identical outputs.

Snapshot layout (little-endian throughout):

    magic   4 bytes   b"TWF1" (1D field) or b"TWF2" (2D field)
    version uint32    currently 1
    1D header: uint64 n;            float64 x_min, x_max, t
    2D header: uint64 nx, ny;       float64 x_min, x_max, y_min, y_max, t
    payload: interleaved float64 pairs (re, im), C order for 2D (x slow)
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

__all__ = [
    "format_float",
    "write_history_csv",
    "write_coupling_csv",
    "write_threemode_csv",
    "write_hole_csv",
    "write_exit_csv",
    "write_snapshot_1d",
    "write_snapshot_2d",
    "read_snapshot",
]

SNAPSHOT_VERSION = 1


def format_float(v: float) -> str:
    return f"{v:.12g}"


def _write_rows(path: Path, header: list[str], rows,
                comments: list[str] | None = None) -> None:
    lines = []
    for c in comments or []:
        lines.append(f"# {c}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_float(v) if isinstance(v, float)
                              else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_history_csv(path, result) -> None:
    """Population history of a 1D run: t, rho per site, excited fraction."""
    n_sites = result.populations.shape[1]
    names = ["rho_L", "rho_R"] if n_sites == 2 else ["rho_L", "rho_M", "rho_R"]
    header = ["t"] + names + ["excited_fraction"]
    rows = [(float(t), *map(float, pops), float(exc))
            for t, pops, exc in zip(result.t, result.populations, result.excited)]
    _write_rows(Path(path), header, rows)


def write_coupling_csv(path, schedule) -> None:
    header = ["t", "J_LM", "J_MR", "mu_L", "mu_M", "mu_R"]
    rows = [(float(t), float(jl), float(jm), *map(float, mu))
            for t, jl, jm, mu in zip(schedule.t, schedule.j_lm,
                                     schedule.j_mr, schedule.mu)]
    _write_rows(Path(path), header, rows)


def write_threemode_csv(path, trajectory, spectrum=None) -> None:
    """Three-mode populations and, when given, the continued eigenvalue
    curves interpolated onto the trajectory times."""
    header = ["t", "p_L", "p_M", "p_R", "E_1", "E_2", "E_3"]
    pops = trajectory.populations
    if spectrum is not None:
        energies = np.stack([
            np.interp(trajectory.t, spectrum.t, spectrum.energies[:, a])
            for a in range(3)], axis=1)
    else:
        energies = np.full((len(trajectory.t), 3), np.nan)
    rows = [(float(t), *map(float, p), *map(float, e))
            for t, p, e in zip(trajectory.t, pops, energies)]
    _write_rows(Path(path), header, rows)


def write_hole_csv(path, result) -> None:
    header = ["t", "h_L", "h_M", "h_R"]
    rows = [(float(t), *map(float, h)) for t, h in zip(result.t, result.holes)]
    _write_rows(Path(path), header, rows)


def write_exit_csv(path, rows, parameter_name: str = "parameter") -> None:
    """Exit fractions vs a swept parameter: rows of (value, ExitFractions)."""
    header = [parameter_name, "f_L", "f_M", "f_R", "f_reflected"]
    out = [(float(v), *map(float, fr.as_tuple())) for v, fr in rows]
    _write_rows(Path(path), header, out, comments=[f"parameter: {parameter_name}"])


def write_snapshot_1d(path, psi: np.ndarray, grid, t: float) -> None:
    with open(path, "wb") as fh:
        fh.write(b"TWF1")
        fh.write(struct.pack("<I", SNAPSHOT_VERSION))
        fh.write(struct.pack("<Q", grid.n))
        fh.write(struct.pack("<3d", grid.x_min, grid.x_max, t))
        _write_payload(fh, psi)


def write_snapshot_2d(path, psi: np.ndarray, grid_x, grid_y, t: float) -> None:
    with open(path, "wb") as fh:
        fh.write(b"TWF2")
        fh.write(struct.pack("<I", SNAPSHOT_VERSION))
        fh.write(struct.pack("<2Q", psi.shape[0], psi.shape[1]))
        fh.write(struct.pack("<5d", grid_x.x_min, grid_x.x_max,
                             grid_y.x_min, grid_y.x_max, t))
        _write_payload(fh, psi)


def _write_payload(fh, psi: np.ndarray) -> None:
    flat = np.asarray(psi, dtype=complex).ravel()
    pairs = np.empty((flat.size, 2), dtype="<f8")
    pairs[:, 0] = flat.real
    pairs[:, 1] = flat.imag
    pairs.tofile(fh)


def read_snapshot(path):
    """Returns (psi, meta) where meta carries the grid bounds and time."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic not in (b"TWF1", b"TWF2"):
            raise ValueError(f"not a snapshot file: magic {magic!r}")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {version}")
        if magic == b"TWF1":
            (n,) = struct.unpack("<Q", fh.read(8))
            x_min, x_max, t = struct.unpack("<3d", fh.read(24))
            data = np.fromfile(fh, dtype="<f8", count=2 * n).reshape(n, 2)
            psi = data[:, 0] + 1j * data[:, 1]
            meta = {"kind": "1d", "n": n, "x_min": x_min, "x_max": x_max, "t": t}
        else:
            nx, ny = struct.unpack("<2Q", fh.read(16))
            x_min, x_max, y_min, y_max, t = struct.unpack("<5d", fh.read(40))
            data = np.fromfile(fh, dtype="<f8", count=2 * nx * ny)
            psi = (data[0::2] + 1j * data[1::2]).reshape(nx, ny)
            meta = {"kind": "2d", "nx": nx, "ny": ny, "x_min": x_min,
                    "x_max": x_max, "y_min": y_min, "y_max": y_max, "t": t}
    return psi, meta
