/**
 * Recipe tests run against real simulation outputs committed under
 * fixtures/ (produced by the triwell CLI presets; see fixtures/README).
 * They cover the shipped acceptance: every recipe renders from preset
 * outputs with the documented axes, and the transport figure shows the
 * right-trap population ending near one.
 */

import { existsSync, mkdtempSync, readdirSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { readTable } from "../src/csv.js";
import { main } from "../src/cli.js";
import { RECIPES } from "../src/recipes.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FIXTURES = join(HERE, "..", "fixtures");

const FIXTURE_DIRS: Record<string, string> = {
  fig1: join(FIXTURES, "fig1"),
  fig2a: join(FIXTURES, "fig2a"),
  fig2b: join(FIXTURES, "fig2b"),
  fig3b: join(FIXTURES, "fig3b"),
  fig3c: join(FIXTURES, "fig3c"),
  fig4: join(FIXTURES, "fig4"),
  fig5: join(FIXTURES, "fig5"),
};

describe("figure recipes on preset outputs", () => {
  for (const [name, dir] of Object.entries(FIXTURE_DIRS)) {
    it(`${name} renders with the documented axes`, () => {
      const rendered = RECIPES[name](dir);
      expect(rendered.length).toBeGreaterThan(0);
      for (const fig of rendered) {
        expect(fig.svg).toContain("<svg");
        expect(fig.svg).toContain("</svg>");
      }
      const joined = rendered.map((r) => r.svg).join("");
      const expectedLabels: Record<string, string[]> = {
        fig1: ["ω_x t", "population"],
        fig2a: ["ω_x t_delay", "α d_min"],
        fig2b: ["ω_x t_delay", "α a_shake"],
        fig3b: ["ω_x t_r", "tilt γ"],
        fig3c: ["tilt γ", "transfer efficiency"],
        fig4: ["ω_x t", "hole population"],
        fig5: ["α d_min", "k_r"],
      };
      for (const label of expectedLabels[name]) {
        expect(joined).toContain(label);
      }
    });
  }

  it("fig1 shows the right-trap population ending near one", () => {
    const table = readTable(join(FIXTURE_DIRS.fig1, "stirap_populations.csv"));
    const rhoR = table.data.get("rho_R")!;
    expect(rhoR[rhoR.length - 1]).toBeGreaterThan(0.95);
    expect(rhoR[0]).toBeLessThan(0.05);
  });

  it("refuses to render from mismatched headers", () => {
    // point the transport recipe at a directory whose CSV has the wrong
    // columns for the figure id
    const dir = mkdtempSync(join(tmpdir(), "twf-fix-"));
    writeFileSync(join(dir, "stirap_populations.csv"),
      "t,h_L,h_M,h_R\n0,1,0,0\n");
    expect(() => RECIPES.fig1(dir)).toThrow(/missing column/);
  });

  it("refuses empty scan files", () => {
    const dir = mkdtempSync(join(tmpdir(), "twf-fix-"));
    writeFileSync(join(dir, "scan_fig2a.csv"), "axis1,axis2,metric,status\n");
    expect(() => RECIPES.fig2a(dir)).toThrow();
  });
});

describe("render cli", () => {
  it("writes SVG files for a valid figure", () => {
    const out = mkdtempSync(join(tmpdir(), "twf-out-"));
    const code = main(["--fig", "fig1", "--in", FIXTURE_DIRS.fig1,
      "--out", out]);
    expect(code).toBe(0);
    const files = readdirSync(out);
    expect(files).toContain("fig1_populations.svg");
  });

  it("exits nonzero and writes nothing on schema mismatch", () => {
    const badIn = mkdtempSync(join(tmpdir(), "twf-bad-"));
    writeFileSync(join(badIn, "stirap_populations.csv"), "a,b\n1,2\n");
    const out = join(mkdtempSync(join(tmpdir(), "twf-out-")), "sub");
    const code = main(["--fig", "fig1", "--in", badIn, "--out", out]);
    expect(code).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects unknown figures", () => {
    expect(main(["--fig", "fig9", "--in", ".", "--out", "."])).toBe(2);
  });
});
