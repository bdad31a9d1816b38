/**
 * Render figures from simulation outputs.
 *
 *   node dist/cli.js --fig fig1 --in ../out/fig1 --out figures/
 *
 * Exits nonzero (without writing anything) when the inputs are missing
 * or their schema does not match the requested figure.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { RECIPES } from "./recipes.js";

function parseArgs(argv: string[]): { fig: string; inDir: string; outDir: string } {
  const args: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const val = argv[i + 1];
    if (!key?.startsWith("--") || val === undefined) {
      throw new Error("usage: --fig <fig1..fig5> --in <dir> --out <dir>");
    }
    args[key.slice(2)] = val;
  }
  const fig = args["fig"];
  const inDir = args["in"];
  const outDir = args["out"];
  if (!fig || !inDir || !outDir) {
    throw new Error("usage: --fig <fig1..fig5> --in <dir> --out <dir>");
  }
  return { fig, inDir, outDir };
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  const recipe = RECIPES[parsed.fig];
  if (!recipe) {
    console.error(`unknown figure '${parsed.fig}'; known: ${Object.keys(RECIPES).join(", ")}`);
    return 2;
  }
  let rendered;
  try {
    rendered = recipe(parsed.inDir);
  } catch (err) {
    console.error(`cannot render ${parsed.fig}: ${(err as Error).message}`);
    return 1;
  }
  mkdirSync(parsed.outDir, { recursive: true });
  for (const fig of rendered) {
    const path = join(parsed.outDir, `${fig.name}.svg`);
    writeFileSync(path, fig.svg);
    console.log(path);
  }
  return 0;
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js");
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
