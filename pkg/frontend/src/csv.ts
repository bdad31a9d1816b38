/**
 * Readers for the simulation CSV outputs.
 *
 * Every file starts with optional `# key: value` comment lines, then a
 * header row, then numeric rows. Readers validate the header against the
 * columns a figure needs and refuse mismatching or empty files, so a
 * recipe can never silently render the wrong data.
 */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  /** parsed `# key: value` metadata lines */
  meta: Record<string, string>;
  columns: string[];
  /** column-major numeric data */
  data: Map<string, number[]>;
  rows: number;
}

export function readTable(path: string): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  const meta: Record<string, string> = {};
  let i = 0;
  while (i < lines.length && lines[i].startsWith("#")) {
    const body = lines[i].slice(1).trim();
    const colon = body.indexOf(":");
    if (colon > 0) {
      meta[body.slice(0, colon).trim()] = body.slice(colon + 1).trim();
    }
    i++;
  }
  if (i >= lines.length) {
    throw new SchemaError(`${path}: no header row`);
  }
  const columns = lines[i].split(",").map((c) => c.trim());
  const dataLines = lines.slice(i + 1);
  if (dataLines.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (const line of dataLines) {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `${path}: row has ${parts.length} fields, expected ${columns.length}`,
      );
    }
    columns.forEach((c, j) => {
      const raw = parts[j].trim();
      data.get(c)!.push(raw === "" ? NaN : Number(raw));
    });
  }
  return { meta, columns, data, rows: dataLines.length };
}

export function requireColumns(table: Table, needed: string[], path: string): void {
  for (const col of needed) {
    if (!table.columns.includes(col)) {
      throw new SchemaError(
        `${path}: missing column '${col}' (found: ${table.columns.join(", ")})`,
      );
    }
  }
}

export interface ScanGrid {
  meta: Record<string, string>;
  axis1: number[];
  axis2: number[] | null;
  /** metric[i][j] over (axis1, axis2); NaN for failed cells */
  metric: number[][];
  axis1Path: string;
  axis2Path: string | null;
  metricName: string;
}

/** Reshape a scan CSV (axis1,axis2,metric,status rows) into its grid. */
export function readScan(path: string): ScanGrid {
  const table = readTable(path);
  requireColumns(table, ["axis1", "axis2", "metric", "status"], path);
  const a1 = table.data.get("axis1")!;
  const a2raw = table.data.get("axis2")!;
  const metric = table.data.get("metric")!;
  const axis1 = [...new Set(a1)];
  const twoD = a2raw.some((v) => Number.isFinite(v));
  const axis2 = twoD ? [...new Set(a2raw.filter((v) => Number.isFinite(v)))] : null;
  const n2 = axis2 ? axis2.length : 1;
  if (axis1.length * n2 !== table.rows) {
    throw new SchemaError(
      `${path}: ${table.rows} rows do not fill a ${axis1.length}x${n2} grid`,
    );
  }
  const grid: number[][] = [];
  for (let i = 0; i < axis1.length; i++) {
    grid.push(metric.slice(i * n2, (i + 1) * n2));
  }
  const axis1Path = (table.meta["axis1"] ?? "axis1").split(" ")[0];
  const axis2Path = axis2 ? (table.meta["axis2"] ?? "axis2").split(" ")[0] : null;
  return {
    meta: table.meta,
    axis1,
    axis2,
    metric: grid,
    axis1Path,
    axis2Path,
    metricName: table.meta["metric"] ?? "metric",
  };
}
