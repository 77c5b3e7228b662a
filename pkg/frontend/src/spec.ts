/**
 * Plot specifications: which files feed which panel, and where the image
 * goes.  A spec either points at a solver run directory (summary.json plus
 * profiles/) or lists the input files explicitly.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { renderFigure, FigureInputs, PanelKind } from "./figure.js";
import type { AxisLabels, ProfilePair } from "./panels.js";
import {
  parseProfileCsv,
  parseSummaryJson,
  SchemaError,
  Summary,
} from "./schema.js";

export interface ProfileSpec {
  kn: number;
  diffusionCsv: string;
  referenceCsv: string;
}

export interface PlotSpec {
  panel: PanelKind;
  output: string;
  runDir?: string;
  summaryJson?: string;
  profiles?: ProfileSpec[];
  labels?: AxisLabels;
  zoomFraction?: number;
}

export function parsePlotSpec(raw: unknown, file = "plot-spec"): PlotSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new SchemaError(`${file}: spec must be an object`);
  }
  const spec = raw as Record<string, unknown>;
  const panel = spec.panel;
  if (
    panel !== "profile" &&
    panel !== "layer-zoom" &&
    panel !== "rate" &&
    panel !== "three-panel"
  ) {
    throw new SchemaError(
      `${file}: "panel" must be profile | layer-zoom | rate | three-panel`,
    );
  }
  if (typeof spec.output !== "string" || spec.output === "") {
    throw new SchemaError(`${file}: "output" path is required`);
  }
  if (spec.runDir === undefined && spec.profiles === undefined &&
      spec.summaryJson === undefined) {
    throw new SchemaError(
      `${file}: give "runDir" or explicit "summaryJson"/"profiles" paths`,
    );
  }
  return spec as unknown as PlotSpec;
}

function readSource(path: string, sources: Map<string, Buffer>): string {
  const bytes = readFileSync(path);
  sources.set(path, bytes);
  return bytes.toString("utf-8");
}

/** Python repr() and JS String() agree on shortest round-trip floats. */
function knFileLabel(kn: number): string {
  return String(kn);
}

export function loadInputs(spec: PlotSpec): FigureInputs {
  const sources = new Map<string, Buffer>();
  let summary: Summary | null = null;

  let summaryPath = spec.summaryJson;
  if (summaryPath === undefined && spec.runDir !== undefined) {
    summaryPath = join(spec.runDir, "summary.json");
  }
  if (summaryPath !== undefined) {
    summary = parseSummaryJson(readSource(summaryPath, sources), summaryPath);
  }

  let profileSpecs = spec.profiles;
  if (profileSpecs === undefined && spec.runDir !== undefined) {
    if (summary === null) {
      throw new SchemaError("run directory has no readable summary.json");
    }
    profileSpecs = summary.points
      .filter((p) => p.error !== null)
      .map((p) => ({
        kn: p.kn,
        diffusionCsv: join(spec.runDir!, "profiles",
                           `diffusion_kn${knFileLabel(p.kn)}.csv`),
        referenceCsv: join(spec.runDir!, "profiles",
                           `reference_kn${knFileLabel(p.kn)}.csv`),
      }));
  }

  const profiles: ProfilePair[] = (profileSpecs ?? []).map((p) => ({
    kn: p.kn,
    diffusion: parseProfileCsv(readSource(p.diffusionCsv, sources),
                               ["x", "rho"], p.diffusionCsv),
    reference: parseProfileCsv(readSource(p.referenceCsv, sources),
                               ["x", "T"], p.referenceCsv),
  }));

  return { profiles, summary, sources };
}

export function renderSpec(spec: PlotSpec): string {
  const inputs = loadInputs(spec);
  return renderFigure(spec.panel, inputs, spec.labels ?? {},
                      spec.zoomFraction ?? 0.15);
}
