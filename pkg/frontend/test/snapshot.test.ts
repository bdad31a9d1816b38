import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { readSnapshot } from "../src/snapshot.js";

function makeSnapshot1d(n: number): string {
  const header = Buffer.alloc(4 + 4 + 8 + 24);
  header.write("TWF1", 0, "latin1");
  header.writeUInt32LE(1, 4);
  header.writeBigUInt64LE(BigInt(n), 8);
  header.writeDoubleLE(-16, 16);
  header.writeDoubleLE(16, 24);
  header.writeDoubleLE(7.5, 32);
  const payload = Buffer.alloc(16 * n);
  for (let i = 0; i < n; i++) {
    payload.writeDoubleLE(0.5, 16 * i);       // re
    payload.writeDoubleLE(-0.5, 16 * i + 8);  // im
  }
  const dir = mkdtempSync(join(tmpdir(), "twf-snap-"));
  const path = join(dir, "f.twf");
  writeFileSync(path, Buffer.concat([header, payload]));
  return path;
}

describe("readSnapshot", () => {
  it("reads a 1D field and computes the density", () => {
    const snap = readSnapshot(makeSnapshot1d(32));
    expect(snap.kind).toBe("1d");
    if (snap.kind === "1d") {
      expect(snap.n).toBe(32);
      expect(snap.t).toBe(7.5);
      expect(snap.density[0]).toBeCloseTo(0.5, 12);
    }
  });

  it("rejects unknown magic", () => {
    const dir = mkdtempSync(join(tmpdir(), "twf-snap-"));
    const path = join(dir, "bad.twf");
    writeFileSync(path, Buffer.from("NOPE...."));
    expect(() => readSnapshot(path)).toThrow(/not a snapshot/);
  });
});
