"""Run configuration: YAML files validated against a published JSON schema.

A configuration selects a scenario and overrides defaults section by
section; unknown keys are rejected.  Shipped presets live in
triwell/presets and reproduce the headline runs (fig1 STIRAP trace,
fig2a/fig2b robustness maps, fig3b/fig3c tilt scans, fig4 two-atom hole
transport, fig5 waveguide splitting).
"""

from __future__ import annotations

import copy
import importlib.resources as resources
import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import yaml

from .errors import ConfigError
from .potentials import (
    PairSchedule,
    PerturbationSpec,
    TrajectorySpec,
    TrapParams,
)
from .spectral import Grid1D

__all__ = ["RunConfig", "load_config", "load_preset", "preset_names", "SCHEMA"]

with resources.files("triwell.schema").joinpath("config.schema.json").open() as fh:
    SCHEMA = json.load(fh)

DEFAULTS: dict = {
    "trap": {"V0": 100.0},
    "grid": {"x_min": -16.0, "x_max": 16.0, "n": 1024},
    "time": {"dt": 0.01, "n_samples": 241},
    "trajectory": {
        "d_max": 9.0, "d_min": 1.5, "t_r": 300.0, "t_i": 0.0,
        "t_delay": 120.0, "t_delay_frac": None,
        "order": "counterintuitive", "ramp": "cosine", "mode": "stirap",
        "mr_sep_speedup": 0.0,
    },
    "perturbation": {"gamma": 0.0, "a_shake": 0.0, "omega_shake": 0.0,
                     "a_shake_frac": None},
    "rabi": {"d_max": 9.0, "d_min": 1.5, "t_r": 300.0, "t_i": 12.0},
    "interaction": {"g1d": None, "w": 0.5, "target_onsite": 0.5},
    "waveguide": {
        "d_max": 9.0, "d_min": 1.5, "ramp_len": 90.0, "delay_len": 36.0,
        "hold_len": 0.0, "order": "counterintuitive",
        "k_mean": 3.5, "k_spread": 1.0, "y_start": -10.0,
        "y_min": -64.0, "y_max": 448.0, "n_y": 4096,
        "dt": 0.01, "t_end": None, "table_dy": 0.1,
    },
    "eig": {"k": 4, "at_time": 0.0},
    "output": {"dir": "out"},
}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration with all defaults resolved."""

    raw: dict

    @property
    def scenario(self) -> str:
        return self.raw["scenario"]

    def section(self, name: str) -> dict:
        return self.raw[name]

    # -- section builders -------------------------------------------------

    def trap(self) -> TrapParams:
        return TrapParams(V0=self.raw["trap"]["V0"])

    def grid(self) -> Grid1D:
        g = self.raw["grid"]
        return Grid1D(g["x_min"], g["x_max"], g["n"])

    def trajectory(self) -> TrajectorySpec:
        t = self.raw["trajectory"]
        delay = t["t_delay"]
        if t.get("t_delay_frac") is not None:
            delay = t["t_delay_frac"] * t["t_r"]
        common = dict(d_max=t["d_max"], d_min=t["d_min"],
                      t_r=t["t_r"], t_i=t["t_i"])
        lm = PairSchedule(**_merge(common, t.get("lm", {})))
        mr = PairSchedule(**_merge(common, t.get("mr", {})))
        return TrajectorySpec(lm=lm, mr=mr, t_delay=delay, order=t["order"],
                              ramp=t["ramp"], mode=t["mode"],
                              mr_sep_speedup=t["mr_sep_speedup"])

    def perturbation(self) -> PerturbationSpec:
        q = self.raw["perturbation"]
        a_shake = q["a_shake"]
        if q.get("a_shake_frac") is not None:
            a_shake = q["a_shake_frac"] * self.raw["trajectory"]["d_min"]
        return PerturbationSpec(gamma=q["gamma"], a_shake=a_shake,
                                omega_shake=q["omega_shake"])

    def rabi_schedule(self) -> PairSchedule:
        return PairSchedule(**self.raw["rabi"])

    def with_overrides(self, overrides: dict) -> "RunConfig":
        return RunConfig(_merge(self.raw, overrides))

    def canonical_json(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))


def validate_raw(data: dict) -> None:
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "(top level)"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from exc


def resolve(data: dict) -> RunConfig:
    """Validate a raw mapping and fill in defaults."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    validate_raw(data)
    merged = _merge(DEFAULTS, data)
    validate_raw({k: v for k, v in merged.items()})
    # consistency checks beyond the schema
    traj = merged["trajectory"]
    if traj["d_min"] >= traj["d_max"]:
        raise ConfigError("trajectory.d_min must be below trajectory.d_max")
    return RunConfig(raw=merged)


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if data is None:
        raise ConfigError(f"{path} is empty")
    return resolve(data)


def preset_names() -> list[str]:
    files = resources.files("triwell.presets")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".yaml"))


def load_preset(name: str) -> RunConfig:
    files = resources.files("triwell.presets")
    candidate = files.joinpath(f"{name}.yaml")
    if not candidate.is_file():
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return resolve(yaml.safe_load(candidate.read_text()))
