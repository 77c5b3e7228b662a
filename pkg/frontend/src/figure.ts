/**
 * Figure assembly: compose panels into one deterministic SVG document with
 * a checksum of every input file embedded in the metadata element.
 */

import { createHash } from "node:crypto";

import type { Summary } from "./schema.js";
import {
  AxisLabels,
  Box,
  layerZoomPanel,
  profilePanel,
  ProfilePair,
  ratePanel,
} from "./panels.js";
import { esc } from "./svg.js";

export type PanelKind = "profile" | "layer-zoom" | "rate" | "three-panel";

export interface FigureInputs {
  profiles: ProfilePair[];
  summary: Summary | null;
  /** raw bytes of every input file, keyed by path (for the checksum) */
  sources: Map<string, Buffer>;
}

const PANEL_WIDTH = 250;
const PANEL_HEIGHT = 210;

export function inputChecksum(sources: Map<string, Buffer>): string {
  const hash = createHash("sha256");
  for (const key of [...sources.keys()].sort()) {
    hash.update(key);
    hash.update("\0");
    hash.update(sources.get(key)!);
    hash.update("\0");
  }
  return hash.digest("hex");
}

function document(width: number, height: number, body: string,
                  checksum: string, title: string | undefined): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}"` +
    ` font-family="Helvetica, Arial, sans-serif">\n` +
    `<metadata>inputs-sha256: ${checksum}</metadata>\n` +
    `<rect width="${width}" height="${height}" fill="#fff"/>\n`;
  const heading = title
    ? `<text x="${width / 2}" y="12" font-size="10" text-anchor="middle"` +
      ` font-weight="600" fill="#222">${esc(title)}</text>\n`
    : "";
  return head + heading + body + "\n</svg>\n";
}

export function renderFigure(kind: PanelKind, inputs: FigureInputs,
                             labels: AxisLabels = {},
                             zoomFraction = 0.15): string {
  const checksum = inputChecksum(inputs.sources);
  const titleOffset = labels.title ? 16 : 0;
  const panelBox = (i: number): Box => ({
    x: i * PANEL_WIDTH,
    y: titleOffset,
    width: PANEL_WIDTH,
    height: PANEL_HEIGHT,
  });
  const panelLabels: AxisLabels = { x: labels.x, y: labels.y };

  const needProfiles = kind !== "rate";
  const needSummary = kind === "rate" || kind === "three-panel";
  if (needProfiles && inputs.profiles.length === 0) {
    throw new Error(`panel "${kind}" needs at least one profile pair`);
  }
  if (needSummary && inputs.summary === null) {
    throw new Error(`panel "${kind}" needs the run summary`);
  }

  let body: string;
  let width: number;
  switch (kind) {
    case "profile":
      body = profilePanel(panelBox(0), inputs.profiles, panelLabels);
      width = PANEL_WIDTH;
      break;
    case "layer-zoom":
      body = layerZoomPanel(panelBox(0), inputs.profiles, panelLabels,
                            zoomFraction);
      width = PANEL_WIDTH;
      break;
    case "rate":
      body = ratePanel(panelBox(0), inputs.summary!, panelLabels);
      width = PANEL_WIDTH;
      break;
    case "three-panel":
      body = [
        profilePanel(panelBox(0), inputs.profiles, panelLabels),
        layerZoomPanel(panelBox(1), inputs.profiles, panelLabels,
                       zoomFraction),
        ratePanel(panelBox(2), inputs.summary!, panelLabels),
      ].join("\n");
      width = 3 * PANEL_WIDTH;
      break;
    default:
      throw new Error(`unknown panel kind "${kind}"`);
  }
  return document(width, PANEL_HEIGHT + titleOffset, body, checksum,
                  labels.title);
}
