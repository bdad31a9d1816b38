"""Declarative parameter scans over runnable scenarios.

A scan runs one scenario per grid cell with one or two parameters swept
over linear ranges.  Cells are independent; a failing cell records an
error status without aborting its neighbors, and results are aggregated
in cell order so the output is deterministic and independent of worker
count.
"""

from __future__ import annotations

import copy
import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import RunConfig
from .errors import TriwellError
from .output import format_float
from .spectral import Grid1D
from .tdse1d import run_cpt, run_rabi, run_stirap
from .twoparticle import InteractionSpec, calibrate_g1d, run_hole_stirap, DEFAULT_GRID_2P
from .waveguide import (
    Grid2D,
    WavePacketSpec,
    cpt_guide_geometry,
    mode_decomposition,
    propagate_2d,
    propagate_channels,
)

__all__ = ["AxisSpec", "ScanSpec", "ScanResult", "run_scan", "run_scenario",
           "scan_to_csv"]


# -- scenario runners -----------------------------------------------------

def _scenario_stirap(cfg: RunConfig) -> dict[str, float]:
    res = run_stirap(cfg.trajectory(), cfg.perturbation(), cfg.trap(),
                     cfg.grid(), dt=cfg.section("time")["dt"],
                     n_samples=cfg.section("time")["n_samples"])
    return {"rho_L": float(res.rho_L[-1]), "rho_M": float(res.rho_M[-1]),
            "rho_R": res.final_efficiency,
            "excited_max": float(res.excited.max())}


def _scenario_cpt(cfg: RunConfig) -> dict[str, float]:
    res = run_cpt(cfg.trajectory(), cfg.perturbation(), cfg.trap(),
                  cfg.grid(), dt=cfg.section("time")["dt"],
                  n_samples=cfg.section("time")["n_samples"])
    return {"rho_L": float(res.rho_L[-1]), "rho_M": float(res.rho_M[-1]),
            "rho_R": res.final_efficiency,
            "coherence": float(res.coherence_lr[-1]),
            "pop_imbalance": float(abs(res.rho_L[-1] - res.rho_R[-1]))}


def _scenario_rabi(cfg: RunConfig) -> dict[str, float]:
    res = run_rabi(cfg.rabi_schedule(), cfg.perturbation(), cfg.trap(),
                   cfg.grid(), dt=cfg.section("time")["dt"],
                   n_samples=cfg.section("time")["n_samples"])
    return {"rho_L": float(res.rho_L[-1]), "rho_R": res.final_efficiency}


def _interaction(cfg: RunConfig, grid: Grid1D) -> InteractionSpec:
    sec = cfg.section("interaction")
    g1d = sec["g1d"]
    if g1d is None:
        g1d = calibrate_g1d(sec["target_onsite"], sec["w"], cfg.trap(), grid)
    return InteractionSpec(g1d=g1d, w=sec["w"])


def _scenario_two_atom(cfg: RunConfig) -> dict[str, float]:
    grid = DEFAULT_GRID_2P
    res = run_hole_stirap(cfg.trajectory(), _interaction(cfg, grid),
                          cfg.perturbation(), cfg.trap(), grid,
                          dt=cfg.section("time")["dt"])
    return {"h_L": float(res.h_L[-1]), "h_M": float(res.h_M[-1]),
            "h_R": res.final_h_R,
            "number_min": float(res.total_number.min())}


def _wg_pieces(cfg: RunConfig):
    sec = cfg.section("waveguide")
    geom = cpt_guide_geometry(d_min=sec["d_min"], d_max=sec["d_max"],
                              ramp_len=sec["ramp_len"],
                              delay_len=sec["delay_len"],
                              hold_len=sec["hold_len"], order=sec["order"])
    packet = WavePacketSpec(k_mean=sec["k_mean"], k_spread=sec["k_spread"],
                            y_start=sec["y_start"])
    grid_y = Grid1D(sec["y_min"], sec["y_max"], sec["n_y"])
    return geom, packet, grid_y, sec


def _fr_metrics(fr) -> dict[str, float]:
    return {"f_L": fr.f_L, "f_M": fr.f_M, "f_R": fr.f_R,
            "f_reflected": fr.f_reflected,
            "asym": abs(fr.f_L - fr.f_R)}


def _scenario_waveguide(cfg: RunConfig) -> dict[str, float]:
    geom, packet, grid_y, sec = _wg_pieces(cfg)
    grid = Grid2D(x=Grid1D(-16.0, 16.0, 256), y=grid_y)
    fr, _ = propagate_2d(geom, packet, cfg.trap(), grid, dt=sec["dt"],
                         t_end=sec["t_end"])
    return _fr_metrics(fr)


def _scenario_channels(cfg: RunConfig) -> dict[str, float]:
    geom, packet, grid_y, sec = _wg_pieces(cfg)
    tables = mode_decomposition(geom, cfg.trap(), dy=sec["table_dy"])
    fr, _ = propagate_channels(tables, packet, grid_y, dt=sec["dt"],
                               t_end=sec["t_end"])
    return _fr_metrics(fr)


SCENARIOS = {
    "stirap": _scenario_stirap,
    "cpt": _scenario_cpt,
    "rabi": _scenario_rabi,
    "two_atom": _scenario_two_atom,
    "waveguide": _scenario_waveguide,
    "channels": _scenario_channels,
}


def run_scenario(name: str, cfg: RunConfig) -> dict[str, float]:
    if name not in SCENARIOS:
        raise TriwellError(f"unknown scenario {name!r}")
    return SCENARIOS[name](cfg)


# -- scan machinery -------------------------------------------------------

@dataclass(frozen=True)
class AxisSpec:
    path: str
    min: float
    max: float
    count: int

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.min])
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class ScanSpec:
    scenario: str
    axis1: AxisSpec
    metric: str
    axis2: AxisSpec | None = None
    label: str = "scan"

    @classmethod
    def from_dict(cls, d: dict) -> "ScanSpec":
        ax2 = d.get("axis2")
        return cls(scenario=d["scenario"], metric=d["metric"],
                   axis1=AxisSpec(**d["axis1"]),
                   axis2=AxisSpec(**ax2) if ax2 else None,
                   label=d.get("label", "scan"))


@dataclass
class ScanResult:
    spec: ScanSpec
    axis1_values: np.ndarray
    axis2_values: np.ndarray | None
    metric: np.ndarray            # (n1, n2) or (n1, 1)
    status: list[list[str]]
    provenance: dict

    @property
    def ok_fraction(self) -> float:
        flat = [s for row in self.status for s in row]
        return sum(s == "ok" for s in flat) / len(flat)


def _set_path(cfg_dict: dict, path: str, value: float) -> None:
    parts = path.split(".")
    node = cfg_dict
    for part in parts[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise TriwellError(f"parameter path {path!r} does not resolve")
        node = node[part]
    if not isinstance(node, dict) or parts[-1] not in node:
        raise TriwellError(f"parameter path {path!r} does not resolve")
    node[parts[-1]] = float(value)


def _run_cell(args):
    scenario, raw_cfg, metric = args
    try:
        metrics = run_scenario(scenario, RunConfig(raw_cfg))
        if metric not in metrics:
            return math.nan, f"error:unknown-metric:{metric}"
        return float(metrics[metric]), "ok"
    except Exception as exc:  # cell isolation: record, don't propagate
        return math.nan, f"error:{type(exc).__name__}"


def run_scan(spec: ScanSpec, base: RunConfig, workers: int = 1) -> ScanResult:
    """Run every cell of the scan; failures are status-coded per cell.

    The result is ordered by cell index whatever the worker count, and a
    scan whose cells all fail raises instead of returning silently.
    """
    v1 = spec.axis1.values()
    v2 = spec.axis2.values() if spec.axis2 else np.array([math.nan])
    jobs = []
    for a in v1:
        for b in v2:
            raw = copy.deepcopy(base.raw)
            _set_path(raw, spec.axis1.path, float(a))
            if spec.axis2:
                _set_path(raw, spec.axis2.path, float(b))
            jobs.append((spec.scenario, raw, spec.metric))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_cell, jobs))
    else:
        outcomes = [_run_cell(j) for j in jobs]
    n1, n2 = len(v1), len(v2)
    metric = np.array([o[0] for o in outcomes]).reshape(n1, n2)
    status = [[outcomes[i * n2 + j][1] for j in range(n2)] for i in range(n1)]
    if all(s != "ok" for row in status for s in row):
        raise TriwellError(f"scan {spec.label!r}: every cell failed")
    digest = hashlib.sha256(
        (base.canonical_json() + repr(spec)).encode()).hexdigest()[:16]
    return ScanResult(spec=spec, axis1_values=v1,
                      axis2_values=None if spec.axis2 is None else v2,
                      metric=metric, status=status,
                      provenance={"config_hash": digest,
                                  "version": __version__})


def scan_to_csv(result: ScanResult) -> str:
    """Render a scan as CSV text: commented axes metadata, then one row
    per cell in row-major order."""
    spec = result.spec
    lines = [
        f"# scenario: {spec.scenario}",
        f"# metric: {spec.metric}",
        f"# axis1: {spec.axis1.path} {format_float(spec.axis1.min)} "
        f"{format_float(spec.axis1.max)} {spec.axis1.count}",
    ]
    if spec.axis2 is not None:
        lines.append(f"# axis2: {spec.axis2.path} {format_float(spec.axis2.min)} "
                     f"{format_float(spec.axis2.max)} {spec.axis2.count}")
    lines.append(f"# config_hash: {result.provenance['config_hash']}")
    lines.append(f"# version: {result.provenance['version']}")
    lines.append("axis1,axis2,metric,status")
    for i, a in enumerate(result.axis1_values):
        if result.axis2_values is None:
            b_vals = [""]
        else:
            b_vals = [format_float(float(b)) for b in result.axis2_values]
        for j, b in enumerate(b_vals):
            m = result.metric[i, j]
            m_str = format_float(float(m)) if math.isfinite(m) else "nan"
            lines.append(f"{format_float(float(a))},{b},{m_str},"
                         f"{result.status[i][j]}")
    return "\n".join(lines) + "\n"
