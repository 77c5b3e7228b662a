#!/usr/bin/env node
/**
 * Batch figure renderer.
 *
 *   node dist/cli.js --spec figure.json
 *   node dist/cli.js --run ../out/example1 --panel three-panel --out fig.svg
 *
 * Exits nonzero with a JSON error object on stderr when inputs are missing
 * or violate the documented CSV schema.
 */

import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { dirname } from "node:path";

import { parsePlotSpec, renderSpec, PlotSpec } from "./spec.js";

function parseArgs(argv: string[]): PlotSpec {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`malformed arguments near "${key}"`);
    }
    flags.set(key.slice(2), value);
  }
  if (flags.has("spec")) {
    const path = flags.get("spec")!;
    const raw = JSON.parse(readFileSync(path, "utf-8"));
    const spec = parsePlotSpec(raw, path);
    for (const key of ["panel", "out", "run"]) {
      if (flags.has(key) && key !== "spec") {
        (spec as any)[key === "out" ? "output" : key === "run" ? "runDir" : key] =
          flags.get(key);
      }
    }
    return spec;
  }
  return parsePlotSpec({
    panel: flags.get("panel") ?? "three-panel",
    output: flags.get("out"),
    runDir: flags.get("run"),
  }, "command line");
}

function main(): void {
  try {
    const spec = parseArgs(process.argv.slice(2));
    const svg = renderSpec(spec);
    mkdirSync(dirname(spec.output), { recursive: true });
    writeFileSync(spec.output, svg);
    process.stdout.write(JSON.stringify({ output: spec.output }) + "\n");
  } catch (err: any) {
    process.stderr.write(
      JSON.stringify({ error: err.constructor.name, message: err.message }) +
        "\n",
    );
    process.exit(1);
  }
}

main();
