"""Command-line entry point.

Subcommands map onto the runnable scenarios; every run loads a validated
configuration (from --config or a shipped --preset), writes CSV outputs
into --out, and prints the headline metric.  Exit codes: 0 success,
2 configuration error, 3 numerical-integrity failure (norm drift or a
packet reaching the box edge), 4 scan finished with failed cells.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import RunConfig, load_config, load_preset, preset_names
from .errors import BoundaryBreachError, ConfigError, NormDriftError
from .output import (
    write_coupling_csv,
    write_exit_csv,
    write_history_csv,
    write_hole_csv,
    write_snapshot_1d,
    write_snapshot_2d,
    write_threemode_csv,
)
from .spectral import Grid1D, coupling_schedule, stationary_states
from .sweep import ScanSpec, run_scan, run_scenario, scan_to_csv
from .potentials import composite_potential

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3
EXIT_PARTIAL_SCAN = 4


def _add_common(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--config", type=Path, help="path to a YAML run config")
    group.add_argument("--preset", choices=preset_names(),
                       help="name of a shipped preset")
    sub.add_argument("--out", type=Path, default=None,
                     help="output directory (default: config output.dir)")
    sub.add_argument("--dt", type=float, default=None, help="override time step")
    sub.add_argument("--grid", type=int, default=None,
                     help="override 1D grid point count")
    sub.add_argument("--workers", type=int, default=None,
                     help="worker processes for scans (default: "
                          "TRIWELL_WORKERS or available parallelism)")


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else load_preset(args.preset)
    overrides: dict = {}
    if args.dt is not None:
        overrides.setdefault("time", {})["dt"] = args.dt
        overrides.setdefault("waveguide", {})["dt"] = args.dt
    if args.grid is not None:
        overrides.setdefault("grid", {})["n"] = args.grid
    if overrides:
        cfg = cfg.with_overrides(overrides)
    return cfg


def _outdir(args, cfg: RunConfig) -> Path:
    out = args.out if args.out is not None else Path(cfg.section("output")["dir"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get("TRIWELL_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _snapshot_times(cfg: RunConfig) -> list[float] | None:
    snaps = cfg.raw.get("snapshots")
    return snaps["times"] if snaps else None


def _cmd_validate(args) -> int:
    cfg = _load(args)
    print(cfg.canonical_json())
    return EXIT_OK


def _cmd_eig(args) -> int:
    from .output import format_float
    cfg = _load(args)
    grid = cfg.grid()
    sec = cfg.section("eig")
    v = composite_potential(grid.x, sec["at_time"], cfg.trajectory(),
                            cfg.perturbation(), cfg.trap())
    energies, _ = stationary_states(v, grid, sec["k"])
    out = _outdir(args, cfg)
    lines = ["index,energy"] + [f"{i},{format_float(float(e))}"
                                for i, e in enumerate(energies)]
    (out / "eigenvalues.csv").write_text("\n".join(lines) + "\n")
    print("  ".join(format_float(float(e)) for e in energies))
    return EXIT_OK


def _cmd_run_1d(args, runner_name: str) -> int:
    from .tdse1d import run_cpt, run_rabi, run_stirap
    cfg = _load(args)
    out = _outdir(args, cfg)
    time_sec = cfg.section("time")
    snaps = _snapshot_times(cfg)
    if runner_name == "rabi":
        res = run_rabi(cfg.rabi_schedule(), cfg.perturbation(), cfg.trap(),
                       cfg.grid(), dt=time_sec["dt"],
                       n_samples=time_sec["n_samples"])
    elif runner_name == "cpt":
        res = run_cpt(cfg.trajectory(), cfg.perturbation(), cfg.trap(),
                      cfg.grid(), dt=time_sec["dt"],
                      n_samples=time_sec["n_samples"], snapshot_times=snaps)
    else:
        res = run_stirap(cfg.trajectory(), cfg.perturbation(), cfg.trap(),
                         cfg.grid(), dt=time_sec["dt"],
                         n_samples=time_sec["n_samples"], snapshot_times=snaps)
    write_history_csv(out / f"{runner_name}_populations.csv", res)
    if runner_name != "rabi":
        sched = coupling_schedule(cfg.trajectory(), cfg.perturbation(),
                                  cfg.trap(), grid=cfg.grid())
        write_coupling_csv(out / "couplings.csv", sched)
        from .threemode import ThreeModeState, instantaneous_spectrum, propagate
        tm = propagate(ThreeModeState.localized(0), sched)
        write_threemode_csv(out / "threemode.csv", tm,
                            instantaneous_spectrum(sched))
    if res.snapshots:
        for t, psi in res.snapshots:
            write_snapshot_1d(out / f"{runner_name}_t{t:07.1f}.twf", psi,
                              cfg.grid(), t)
    print(f"final rho_R = {res.final_efficiency:.6f}")
    return EXIT_OK


def _cmd_two_atom(args) -> int:
    from .sweep import _interaction
    from .twoparticle import DEFAULT_GRID_2P, run_hole_stirap
    cfg = _load(args)
    out = _outdir(args, cfg)
    grid = DEFAULT_GRID_2P
    res = run_hole_stirap(cfg.trajectory(), _interaction(cfg, grid),
                          cfg.perturbation(), cfg.trap(), grid,
                          dt=cfg.section("time")["dt"],
                          snapshot_times=_snapshot_times(cfg))
    write_hole_csv(out / "hole_populations.csv", res)
    if res.snapshots:
        for t, psi in res.snapshots:
            write_snapshot_2d(out / f"two_atom_t{t:07.1f}.twf", psi, grid,
                              grid, t)
    print(f"final h_R = {res.final_h_R:.6f}")
    return EXIT_OK


def _cmd_waveguide(args, method: str) -> int:
    from .sweep import _wg_pieces
    from .waveguide import Grid2D, mode_decomposition, propagate_2d, propagate_channels
    cfg = _load(args)
    out = _outdir(args, cfg)
    geom, packet, grid_y, sec = _wg_pieces(cfg)
    if method == "waveguide":
        grid = Grid2D(x=Grid1D(-16.0, 16.0, 256), y=grid_y)
        want_snaps = _snapshot_times(cfg)
        fr, info = propagate_2d(geom, packet, cfg.trap(), grid, dt=sec["dt"],
                                t_end=sec["t_end"],
                                return_field=bool(want_snaps))
        if want_snaps and "psi" in info:
            write_snapshot_2d(out / "waveguide_final.twf", info["psi"],
                              grid.x, grid.y, info["t_end"])
    else:
        tables = mode_decomposition(geom, cfg.trap(), dy=sec["table_dy"])
        fr, info = propagate_channels(tables, packet, grid_y, dt=sec["dt"],
                                      t_end=sec["t_end"])
    write_exit_csv(out / f"{method}_exit_fractions.csv",
                   [(packet.k_mean, fr)], parameter_name="k_mean")
    print(f"f_L = {fr.f_L:.4f}  f_M = {fr.f_M:.4f}  f_R = {fr.f_R:.4f}  "
          f"f_reflected = {fr.f_reflected:.5f}")
    return EXIT_OK


def _cmd_scan(args) -> int:
    cfg = _load(args)
    out = _outdir(args, cfg)
    scan_sec = cfg.raw.get("scan")
    if not scan_sec:
        raise ConfigError("config has no scan section")
    workers = _workers(args)
    any_failed = False
    for entry in scan_sec["scans"]:
        spec = ScanSpec.from_dict(entry)
        base = cfg.with_overrides({"scenario": spec.scenario,
                                   **entry.get("overrides", {})})
        result = run_scan(spec, base, workers=workers)
        path = out / f"scan_{spec.label}.csv"
        path.write_text(scan_to_csv(result))
        ok = result.ok_fraction
        any_failed |= ok < 1.0
        print(f"{spec.label}: {result.metric.size} cells, "
              f"{ok * 100:.0f}% ok -> {path}")
    return EXIT_PARTIAL_SCAN if any_failed else EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="triwell",
        description="Matter-wave transport and splitting in three coupled "
                    "wells and waveguides")
    subs = parser.add_subparsers(dest="command", required=True)
    for name in ("validate", "eig", "stirap", "cpt", "rabi", "two-atom",
                 "waveguide", "channels", "scan"):
        _add_common(subs.add_parser(name))
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "eig":
            return _cmd_eig(args)
        if args.command in ("stirap", "cpt", "rabi"):
            return _cmd_run_1d(args, args.command)
        if args.command == "two-atom":
            return _cmd_two_atom(args)
        if args.command in ("waveguide", "channels"):
            return _cmd_waveguide(args, args.command)
        if args.command == "scan":
            return _cmd_scan(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NormDriftError, BoundaryBreachError) as exc:
        print(f"numerical integrity error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    sys.exit(main())
