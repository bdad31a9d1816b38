/**
 * Figure recipes: which input files a figure consumes, which columns they
 * must carry, and how they render. A recipe refuses to render when the
 * input headers do not match what its figure id expects.
 */

import { existsSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { readScan, readTable, requireColumns, SchemaError, Table } from "./csv.js";
import { readSnapshot } from "./snapshot.js";
import { densityPanel, heatmap, linePlot, PALETTE, Series } from "./svg.js";

export interface Rendered {
  name: string;
  svg: string;
}

export type Recipe = (inDir: string) => Rendered[];

function tableOf(inDir: string, file: string, needed: string[]): Table {
  const path = join(inDir, file);
  const table = readTable(path);
  requireColumns(table, needed, path);
  return table;
}

function populationSeries(table: Table, columns: string[], labels: string[]): Series[] {
  const t = table.data.get("t")!;
  return columns.map((c, i) => ({
    x: t,
    y: table.data.get(c)!,
    label: labels[i],
    color: PALETTE[i % PALETTE.length],
  }));
}

/** Population traces of the transport run. */
export function fig1(inDir: string): Rendered[] {
  const table = tableOf(inDir, "stirap_populations.csv",
    ["t", "rho_L", "rho_M", "rho_R"]);
  const pops = linePlot(
    populationSeries(table, ["rho_L", "rho_M", "rho_R"],
      ["ρ_L", "ρ_M", "ρ_R"]),
    "ω_x t", "population", "ground state populations", [0, 1.05]);
  const out: Rendered[] = [{ name: "fig1_populations", svg: pops }];
  const couplingPath = join(inDir, "couplings.csv");
  if (existsSync(couplingPath)) {
    const c = tableOf(inDir, "couplings.csv", ["t", "J_LM", "J_MR"]);
    out.push({
      name: "fig1_couplings",
      svg: linePlot(
        populationSeries(c, ["J_LM", "J_MR"], ["J_LM", "J_MR"]),
        "ω_x t", "J / ħω_x", "tunneling couplings"),
    });
  }
  return out;
}

function scanHeatmap(inDir: string, file: string, name: string,
                     xlabel: string, ylabel: string, title: string): Rendered[] {
  const grid = readScan(join(inDir, file));
  if (!grid.axis2) {
    throw new SchemaError(`${file}: expected a two-axis scan for ${name}`);
  }
  return [{
    name,
    svg: heatmap(grid.axis1, grid.axis2, grid.metric, xlabel, ylabel, title,
      [0, 1]),
  }];
}

/** Robustness map over delay time and minimal trap distance. */
export function fig2a(inDir: string): Rendered[] {
  return scanHeatmap(inDir, "scan_fig2a.csv", "fig2a",
    "ω_x t_delay", "α d_min", "transfer efficiency");
}

/** Robustness map over delay time and shaking amplitude. */
export function fig2b(inDir: string): Rendered[] {
  return scanHeatmap(inDir, "scan_fig2b.csv", "fig2b",
    "ω_x t_delay", "α a_shake", "transfer efficiency under shaking");
}

/** Efficiency over ramp duration and tilt. */
export function fig3b(inDir: string): Rendered[] {
  return scanHeatmap(inDir, "scan_fig3b.csv", "fig3b",
    "ω_x t_r", "tilt γ", "transfer efficiency under tilt");
}

/** Tilt comparison: adiabatic transport vs direct oscillation. */
export function fig3c(inDir: string): Rendered[] {
  const curves: Series[] = [];
  const sources: Array<[string, string, string | undefined]> = [
    ["scan_fig3c_stirap.csv", "transport t_r=300", undefined],
    ["scan_fig3c_rabi_slow.csv", "oscillation t_r=300", "6 3"],
    ["scan_fig3c_rabi_fast.csv", "oscillation t_r=32", "2 3"],
  ];
  sources.forEach(([file, label, dash], i) => {
    const grid = readScan(join(inDir, file));
    if (grid.axis2) {
      throw new SchemaError(`${file}: expected a one-axis scan`);
    }
    curves.push({
      x: grid.axis1,
      y: grid.metric.map((row) => row[0]),
      label,
      color: PALETTE[i],
      dash,
    });
  });
  return [{
    name: "fig3c",
    svg: linePlot(curves, "tilt γ", "transfer efficiency",
      "tilt sensitivity", [0, 1.05]),
  }];
}

/** Hole populations and two-particle probability snapshots. */
export function fig4(inDir: string): Rendered[] {
  const table = tableOf(inDir, "hole_populations.csv",
    ["t", "h_L", "h_M", "h_R"]);
  const out: Rendered[] = [{
    name: "fig4_holes",
    svg: linePlot(
      populationSeries(table, ["h_L", "h_M", "h_R"],
        ["h_L", "h_M", "h_R"]),
      "ω_x t", "hole population", "hole transport", [0, 1.05]),
  }];
  const snaps = readdirSync(inDir).filter(
    (f: string) => f.startsWith("two_atom_t") && f.endsWith(".twf")).sort();
  snaps.forEach((f: string, i: number) => {
    const snap = readSnapshot(join(inDir, f));
    if (snap.kind !== "2d") {
      throw new SchemaError(`${f}: expected a 2D snapshot`);
    }
    out.push({
      name: `fig4_density_${String(i).padStart(2, "0")}`,
      svg: densityPanel(snap.nx, snap.ny, snap.density,
        snap.xMin, snap.xMax, snap.yMin, snap.yMax,
        "α x₂", "α x₁",
        `|ψ(x₁,x₂)|² at ω_x t = ${snap.t}`),
    });
  });
  return out;
}

/** Waveguide splitting: exit fractions vs distance and velocity. */
export function fig5(inDir: string): Rendered[] {
  const out: Rendered[] = [];
  const e = readScan(join(inDir, "scan_fig5e.csv"));
  if (e.axis2) throw new SchemaError("scan_fig5e.csv: expected one axis");
  out.push({
    name: "fig5e",
    svg: linePlot([{
      x: e.axis1, y: e.metric.map((r) => r[0]),
      label: e.metricName, color: PALETTE[0],
    }], "α d_min", e.metricName,
      "exit fraction vs minimal guide distance"),
  });
  const f = readScan(join(inDir, "scan_fig5f.csv"));
  if (f.axis2) throw new SchemaError("scan_fig5f.csv: expected one axis");
  out.push({
    name: "fig5f",
    svg: linePlot([{
      x: f.axis1, y: f.metric.map((r) => r[0]),
      label: "|f_L - f_R|", color: PALETTE[1],
    }], "⟨k_y⟩ / k_r", "|f_L - f_R|",
      "splitting asymmetry vs mean velocity"),
  });
  const snapPath = join(inDir, "waveguide_final.twf");
  if (existsSync(snapPath)) {
    const snap = readSnapshot(snapPath);
    if (snap.kind === "2d") {
      out.push({
        name: "fig5_density",
        svg: densityPanel(snap.nx, snap.ny, snap.density,
          snap.xMin, snap.xMax, snap.yMin, snap.yMax,
          "α y", "α x", `|ψ(x,y)|² at ω_x t = ${snap.t}`),
      });
    }
  }
  return out;
}

export const RECIPES: Record<string, Recipe> = {
  fig1, fig2a, fig2b, fig3b, fig3c, fig4, fig5,
};
