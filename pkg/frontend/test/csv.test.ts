import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { readScan, readTable, requireColumns, SchemaError } from "../src/csv.js";

function tmpCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "twf-csv-"));
  const path = join(dir, "t.csv");
  writeFileSync(path, content);
  return path;
}

describe("readTable", () => {
  it("parses header, rows and metadata comments", () => {
    const path = tmpCsv("# metric: rho_R\nt,rho_L\n0,1\n1,0.5\n");
    const table = readTable(path);
    expect(table.columns).toEqual(["t", "rho_L"]);
    expect(table.rows).toBe(2);
    expect(table.meta["metric"]).toBe("rho_R");
    expect(table.data.get("rho_L")).toEqual([1, 0.5]);
  });

  it("rejects an empty file", () => {
    expect(() => readTable(tmpCsv(""))).toThrow(SchemaError);
  });

  it("rejects a header-only file", () => {
    expect(() => readTable(tmpCsv("t,rho_L\n"))).toThrow(SchemaError);
  });

  it("rejects ragged rows", () => {
    expect(() => readTable(tmpCsv("t,rho_L\n0,1,2\n"))).toThrow(SchemaError);
  });

  it("flags missing columns", () => {
    const table = readTable(tmpCsv("t,rho_L\n0,1\n"));
    expect(() => requireColumns(table, ["rho_R"], "t.csv")).toThrow(SchemaError);
  });
});

describe("readScan", () => {
  it("reshapes a 2D scan row-major", () => {
    const path = tmpCsv(
      "# scenario: stirap\n# metric: rho_R\n# axis1: trajectory.t_delay 0 10 2\n" +
      "# axis2: trajectory.d_min 1 2 2\n" +
      "axis1,axis2,metric,status\n0,1,0.1,ok\n0,2,0.2,ok\n10,1,0.3,ok\n10,2,0.4,ok\n");
    const grid = readScan(path);
    expect(grid.axis1).toEqual([0, 10]);
    expect(grid.axis2).toEqual([1, 2]);
    expect(grid.metric).toEqual([[0.1, 0.2], [0.3, 0.4]]);
    expect(grid.axis1Path).toBe("trajectory.t_delay");
  });

  it("handles 1D scans with empty axis2", () => {
    const path = tmpCsv(
      "# metric: f_R\naxis1,axis2,metric,status\n1,,0.5,ok\n2,,0.6,ok\n");
    const grid = readScan(path);
    expect(grid.axis2).toBeNull();
    expect(grid.metric).toEqual([[0.5], [0.6]]);
  });

  it("records failed cells as NaN", () => {
    const path = tmpCsv(
      "axis1,axis2,metric,status\n1,,nan,error:ValueError\n2,,0.6,ok\n");
    const grid = readScan(path);
    expect(Number.isNaN(grid.metric[0][0])).toBe(true);
  });

  it("rejects grids that do not fill", () => {
    const path = tmpCsv(
      "# axis2: d 1 2 2\naxis1,axis2,metric,status\n0,1,0.1,ok\n0,2,0.2,ok\n10,1,0.3,ok\n");
    expect(() => readScan(path)).toThrow(SchemaError);
  });
});
