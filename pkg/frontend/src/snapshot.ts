/**
 * Reader for the binary field snapshots (.twf).
 *
 * Layout (little-endian): magic "TWF1"/"TWF2", uint32 version, then the
 * grid header (1D: uint64 n, float64 x_min, x_max, t; 2D: uint64 nx, ny,
 * float64 x_min, x_max, y_min, y_max, t) followed by interleaved
 * (re, im) float64 pairs in C order.
 */

import { readFileSync } from "node:fs";

export interface Snapshot1D {
  kind: "1d";
  n: number;
  xMin: number;
  xMax: number;
  t: number;
  /** |psi|^2 on the grid */
  density: Float64Array;
}

export interface Snapshot2D {
  kind: "2d";
  nx: number;
  ny: number;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
  t: number;
  /** |psi|^2, row-major (nx rows of ny) */
  density: Float64Array;
}

export type Snapshot = Snapshot1D | Snapshot2D;

export function readSnapshot(path: string): Snapshot {
  const buf = readFileSync(path);
  const magic = buf.subarray(0, 4).toString("latin1");
  if (magic !== "TWF1" && magic !== "TWF2") {
    throw new Error(`${path}: not a snapshot file (magic '${magic}')`);
  }
  const version = buf.readUInt32LE(4);
  if (version !== 1) {
    throw new Error(`${path}: unsupported snapshot version ${version}`);
  }
  let off = 8;
  if (magic === "TWF1") {
    const n = Number(buf.readBigUInt64LE(off));
    off += 8;
    const xMin = buf.readDoubleLE(off);
    const xMax = buf.readDoubleLE(off + 8);
    const t = buf.readDoubleLE(off + 16);
    off += 24;
    return { kind: "1d", n, xMin, xMax, t, density: densityOf(buf, off, n) };
  }
  const nx = Number(buf.readBigUInt64LE(off));
  const ny = Number(buf.readBigUInt64LE(off + 8));
  off += 16;
  const xMin = buf.readDoubleLE(off);
  const xMax = buf.readDoubleLE(off + 8);
  const yMin = buf.readDoubleLE(off + 16);
  const yMax = buf.readDoubleLE(off + 24);
  const t = buf.readDoubleLE(off + 32);
  off += 40;
  return {
    kind: "2d", nx, ny, xMin, xMax, yMin, yMax, t,
    density: densityOf(buf, off, nx * ny),
  };
}

function densityOf(buf: Buffer, offset: number, count: number): Float64Array {
  const out = new Float64Array(count);
  for (let i = 0; i < count; i++) {
    const re = buf.readDoubleLE(offset + 16 * i);
    const im = buf.readDoubleLE(offset + 16 * i + 8);
    out[i] = re * re + im * im;
  }
  return out;
}
