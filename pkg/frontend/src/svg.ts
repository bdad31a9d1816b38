/**
 * Minimal SVG plotting: line charts and heatmaps, no DOM, no browser.
 * Just enough styling for publication-like population traces and
 * robustness maps; everything returns an SVG string.
 */

export interface Series {
  x: number[];
  y: number[];
  label: string;
  color: string;
  dash?: string;
}

const W = 640;
const H = 440;
const M = { left: 70, right: 24, top: 36, bottom: 56 };

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

function finiteExtent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!Number.isFinite(lo)) throw new Error("no finite values to plot");
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function ticks(lo: number, hi: number, n = 5): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= n + 1) ?? 10 * step;
  const first = Math.ceil(lo / chosen) * chosen;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += chosen) {
    out.push(Number(v.toPrecision(10)));
  }
  return out;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

function axes(
  xlo: number, xhi: number, ylo: number, yhi: number,
  xlabel: string, ylabel: string, title: string,
): { head: string[]; sx: (v: number) => number; sy: (v: number) => number } {
  const sx = (v: number) => M.left + ((v - xlo) / (xhi - xlo)) * (W - M.left - M.right);
  const sy = (v: number) => H - M.bottom - ((v - ylo) / (yhi - ylo)) * (H - M.top - M.bottom);
  const head: string[] = [];
  head.push(`<rect width="${W}" height="${H}" fill="white"/>`);
  head.push(`<text x="${W / 2}" y="20" text-anchor="middle" font-size="15" font-family="sans-serif">${title}</text>`);
  for (const t of ticks(xlo, xhi)) {
    const px = sx(t);
    head.push(`<line x1="${px}" y1="${H - M.bottom}" x2="${px}" y2="${H - M.bottom + 5}" stroke="black"/>`);
    head.push(`<text x="${px}" y="${H - M.bottom + 20}" text-anchor="middle" font-size="12" font-family="sans-serif">${fmt(t)}</text>`);
  }
  for (const t of ticks(ylo, yhi)) {
    const py = sy(t);
    head.push(`<line x1="${M.left - 5}" y1="${py}" x2="${M.left}" y2="${py}" stroke="black"/>`);
    head.push(`<text x="${M.left - 9}" y="${py + 4}" text-anchor="end" font-size="12" font-family="sans-serif">${fmt(t)}</text>`);
  }
  head.push(`<rect x="${M.left}" y="${M.top}" width="${W - M.left - M.right}" height="${H - M.top - M.bottom}" fill="none" stroke="black"/>`);
  head.push(`<text x="${(M.left + W - M.right) / 2}" y="${H - 14}" text-anchor="middle" font-size="14" font-family="sans-serif">${xlabel}</text>`);
  head.push(`<text x="18" y="${(M.top + H - M.bottom) / 2}" text-anchor="middle" font-size="14" font-family="sans-serif" transform="rotate(-90 18 ${(M.top + H - M.bottom) / 2})">${ylabel}</text>`);
  return { head, sx, sy };
}

export function linePlot(
  series: Series[], xlabel: string, ylabel: string, title: string,
  yRange?: [number, number],
): string {
  const [xlo, xhi] = finiteExtent(series.flatMap((s) => s.x));
  const [ylo, yhi] = yRange ?? padRange(finiteExtent(series.flatMap((s) => s.y)));
  const { head, sx, sy } = axes(xlo, xhi, ylo, yhi, xlabel, ylabel, title);
  const body: string[] = [];
  series.forEach((s, idx) => {
    const pts = s.x
      .map((xv, i) => [xv, s.y[i]])
      .filter(([, yv]) => Number.isFinite(yv))
      .map(([xv, yv]) => `${sx(xv).toFixed(2)},${sy(yv).toFixed(2)}`)
      .join(" ");
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    body.push(`<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.8"${dash}/>`);
    const ly = M.top + 16 + 16 * idx;
    body.push(`<line x1="${W - M.right - 150}" y1="${ly - 4}" x2="${W - M.right - 122}" y2="${ly - 4}" stroke="${s.color}" stroke-width="2"${dash}/>`);
    body.push(`<text x="${W - M.right - 116}" y="${ly}" font-size="12" font-family="sans-serif">${s.label}</text>`);
  });
  return wrap([...head, ...body]);
}

function padRange([lo, hi]: [number, number]): [number, number] {
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

/** Two-color diverging map (dark blue -> white -> dark red). */
function colormap(u: number): string {
  const t = Math.min(1, Math.max(0, u));
  const r = Math.round(255 * Math.min(1, 0.1 + 1.4 * t));
  const g = Math.round(255 * (t < 0.5 ? 0.1 + 1.3 * t : 1.6 * (1 - t)));
  const b = Math.round(255 * Math.min(1, 1.1 - 1.1 * t));
  return `rgb(${r},${g},${b})`;
}

export function heatmap(
  axis1: number[], axis2: number[], values: number[][],
  xlabel: string, ylabel: string, title: string,
  range?: [number, number],
): string {
  const flat = values.flat();
  const [lo, hi] = range ?? finiteExtent(flat);
  const [xlo, xhi] = finiteExtent(axis1);
  const [ylo, yhi] = finiteExtent(axis2);
  const { head, sx, sy } = axes(xlo, xhi, ylo, yhi, xlabel, ylabel, title);
  const body: string[] = [];
  const dx = axis1.length > 1 ? (sx(axis1[1]) - sx(axis1[0])) : W - M.left - M.right;
  const dy = axis2.length > 1 ? (sy(axis2[0]) - sy(axis2[1])) : H - M.top - M.bottom;
  for (let i = 0; i < axis1.length; i++) {
    for (let j = 0; j < axis2.length; j++) {
      const v = values[i][j];
      const fill = Number.isFinite(v) ? colormap((v - lo) / (hi - lo || 1)) : "#bbbbbb";
      const px = sx(axis1[i]) - dx / 2;
      const py = sy(axis2[j]) - dy / 2;
      body.push(`<rect x="${px.toFixed(2)}" y="${py.toFixed(2)}" width="${Math.abs(dx).toFixed(2)}" height="${Math.abs(dy).toFixed(2)}" fill="${fill}"/>`);
    }
  }
  body.push(`<text x="${W - M.right}" y="${H - 14}" text-anchor="end" font-size="11" font-family="sans-serif">scale ${fmt(lo)} to ${fmt(hi)}</text>`);
  // redraw the frame over the cells
  body.push(`<rect x="${M.left}" y="${M.top}" width="${W - M.left - M.right}" height="${H - M.top - M.bottom}" fill="none" stroke="black"/>`);
  return wrap([...head, ...body]);
}

/** Density panel from a row-major matrix, used for field snapshots. */
export function densityPanel(
  nx: number, ny: number, density: Float64Array,
  xMin: number, xMax: number, yMin: number, yMax: number,
  xlabel: string, ylabel: string, title: string,
): string {
  const { head } = axes(yMin, yMax, xMin, xMax, xlabel, ylabel, title);
  const body: string[] = [];
  let hi = 0;
  for (const v of density) hi = Math.max(hi, v);
  const pw = (W - M.left - M.right) / ny;
  const ph = (H - M.top - M.bottom) / nx;
  // downsample to at most ~160x120 cells to keep files small
  const stepX = Math.max(1, Math.floor(nx / 120));
  const stepY = Math.max(1, Math.floor(ny / 160));
  for (let i = 0; i < nx; i += stepX) {
    for (let j = 0; j < ny; j += stepY) {
      let v = 0;
      for (let a = i; a < Math.min(nx, i + stepX); a++) {
        for (let b = j; b < Math.min(ny, j + stepY); b++) {
          v = Math.max(v, density[a * ny + b]);
        }
      }
      if (v < 1e-6 * hi) continue;
      const px = M.left + j * pw;
      const py = M.top + (nx - i - stepX) * ph;
      body.push(`<rect x="${px.toFixed(2)}" y="${py.toFixed(2)}" width="${(pw * stepY).toFixed(2)}" height="${(ph * stepX).toFixed(2)}" fill="${colormap(Math.sqrt(v / hi))}"/>`);
    }
  }
  body.push(`<rect x="${M.left}" y="${M.top}" width="${W - M.left - M.right}" height="${H - M.top - M.bottom}" fill="none" stroke="black"/>`);
  return wrap([...head, ...body]);
}

function wrap(parts: string[]): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">\n${parts.join("\n")}\n</svg>\n`;
}
