/**
 * The three panel types: full-domain profile overlay, boundary-layer zoom,
 * and the log-log convergence-rate plot.  Panels draw into a given box and
 * return SVG fragments; no science is recomputed here — the rate panel's
 * slope annotation is the harness-fitted value read from summary.json.
 */

import type { ProfileCurve, Summary } from "./schema.js";
import {
  CURVE_COLORS,
  line,
  linearScale,
  logScale,
  niceTicks,
  pathElement,
  polylinePath,
  px,
  Scale,
  text,
} from "./svg.js";

export interface Box {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface ProfilePair {
  kn: number;
  diffusion: ProfileCurve;
  reference: ProfileCurve;
}

export interface AxisLabels {
  x?: string;
  y?: string;
  title?: string;
}

const MARGIN = { left: 40, right: 8, top: 18, bottom: 30 };

function plotArea(box: Box) {
  return {
    x0: box.x + MARGIN.left,
    y0: box.y + MARGIN.top,
    w: box.width - MARGIN.left - MARGIN.right,
    h: box.height - MARGIN.top - MARGIN.bottom,
  };
}

function frame(area: { x0: number; y0: number; w: number; h: number }): string {
  return (
    `<rect x="${px(area.x0)}" y="${px(area.y0)}" width="${px(area.w)}"` +
    ` height="${px(area.h)}" fill="none" stroke="#444" stroke-width="0.8"/>`
  );
}

function axisLabels(box: Box, area: ReturnType<typeof plotArea>,
                    labels: AxisLabels): string[] {
  const out: string[] = [];
  if (labels.title) {
    out.push(text(area.x0 + area.w / 2, box.y + 10, labels.title, {
      size: 9, anchor: "middle",
    }));
  }
  if (labels.x) {
    out.push(text(area.x0 + area.w / 2, box.y + box.height - 6, labels.x, {
      size: 8, anchor: "middle",
    }));
  }
  if (labels.y) {
    out.push(text(box.x + 10, area.y0 + area.h / 2, labels.y, {
      size: 8, anchor: "middle", rotate: true,
    }));
  }
  return out;
}

function numberLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(Number(v.toPrecision(4)));
  }
  return v.toExponential(0).replace("e-", "e-").replace("e+", "e");
}

function linearAxes(area: ReturnType<typeof plotArea>, xs: Scale, ys: Scale,
                    gridY = true): string[] {
  const out: string[] = [];
  for (const t of niceTicks(xs.domain[0], xs.domain[1], 4)) {
    const x = xs(t);
    out.push(line(x, area.y0 + area.h, x, area.y0 + area.h + 3, "#444", 0.8));
    out.push(text(x, area.y0 + area.h + 11, numberLabel(t), {
      size: 7, anchor: "middle",
    }));
  }
  for (const t of niceTicks(ys.domain[0], ys.domain[1], 5)) {
    const y = ys(t);
    if (gridY) out.push(line(area.x0, y, area.x0 + area.w, y, "#eee", 0.5));
    out.push(line(area.x0 - 3, y, area.x0, y, "#444", 0.8));
    out.push(text(area.x0 - 5, y + 2.3, numberLabel(t), {
      size: 7, anchor: "end",
    }));
  }
  return out;
}

function dataRange(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(hi > lo)) {
    hi = lo + 1;
  }
  const pad = 0.06 * (hi - lo);
  return [lo - pad, hi + pad];
}

function knLabel(kn: number): string {
  const inv = 1 / kn;
  if (Number.isInteger(inv)) return `Kn = 1/${inv}`;
  return `Kn = ${numberLabel(kn)}`;
}

function profileCurves(area: ReturnType<typeof plotArea>,
                       profiles: ProfilePair[], xMax: number): string[] {
  const out: string[] = [];
  const ysAll: number[] = [];
  for (const p of profiles) {
    for (let i = 0; i < p.reference.x.length; i++) {
      if (p.reference.x[i] <= xMax) ysAll.push(p.reference.y[i]);
    }
    for (let i = 0; i < p.diffusion.x.length; i++) {
      if (p.diffusion.x[i] <= xMax) ysAll.push(p.diffusion.y[i]);
    }
  }
  const xs = linearScale([0, xMax], [area.x0, area.x0 + area.w]);
  const ys = linearScale(dataRange(ysAll), [area.y0 + area.h, area.y0]);
  out.push(...linearAxes(area, xs, ys));

  profiles.forEach((p, i) => {
    const color = CURVE_COLORS[i % CURVE_COLORS.length];
    const keep = (c: ProfileCurve) => {
      const sel = c.x.map((v, j) => [v, c.y[j]] as const).filter(
        ([v]) => v <= xMax);
      return { x: sel.map(([v]) => v), y: sel.map(([, w]) => w) };
    };
    const ref = keep(p.reference);
    const dif = keep(p.diffusion);
    out.push(pathElement(polylinePath(ref.x, ref.y, xs, ys),
                         { color, width: 1.1 }));
    out.push(pathElement(polylinePath(dif.x, dif.y, xs, ys),
                         { color, width: 1.0, dash: "4,2.5" }));
    out.push(text(area.x0 + area.w - 4, area.y0 + 9 + 9 * i, knLabel(p.kn), {
      size: 7, fill: color, anchor: "end",
    }));
  });
  out.push(frame(area));
  return out;
}

/** Full-domain overlay of kinetic temperature (solid) and limit (dashed). */
export function profilePanel(box: Box, profiles: ProfilePair[],
                             labels: AxisLabels = {}): string {
  const area = plotArea(box);
  const parts = [
    ...axisLabels(box, area, { x: "x", y: "temperature", title: "profiles",
                               ...labels }),
    ...profileCurves(area, profiles, 1.0),
  ];
  return `<g>${parts.join("")}</g>`;
}

/** Zoom on the boundary layer near x = 0. */
export function layerZoomPanel(box: Box, profiles: ProfilePair[],
                               labels: AxisLabels = {},
                               zoomFraction = 0.15): string {
  const area = plotArea(box);
  const parts = [
    ...axisLabels(box, area, { x: "x", y: "temperature",
                               title: "layer near x = 0", ...labels }),
    ...profileCurves(area, profiles, zoomFraction),
  ];
  return `<g>${parts.join("")}</g>`;
}

/** Log-log error vs Kn with the harness-fitted slope annotated. */
export function ratePanel(box: Box, summary: Summary,
                          labels: AxisLabels = {}): string {
  const area = plotArea(box);
  const points = summary.points.filter((p) => p.error !== null) as {
    kn: number; error: number;
  }[];
  if (points.length === 0) {
    throw new Error("rate panel needs at least one successful point");
  }
  const kns = points.map((p) => p.kn);
  const errs = points.map((p) => p.error);
  const xDom: [number, number] = [Math.min(...kns) / 1.3,
                                  Math.max(...kns) * 1.3];
  const yDom: [number, number] = [Math.min(...errs) / 1.6,
                                  Math.max(...errs) * 1.6];
  const xs = logScale(xDom, [area.x0, area.x0 + area.w]);
  const ys = logScale(yDom, [area.y0 + area.h, area.y0]);

  const parts: string[] = [...axisLabels(box, area, {
    x: "Kn", y: "interior error", title: "convergence", ...labels,
  })];

  for (const t of kns) {
    const x = xs(t);
    parts.push(line(x, area.y0 + area.h, x, area.y0 + area.h + 3, "#444", 0.8));
    parts.push(text(x, area.y0 + area.h + 11, numberLabel(t), {
      size: 7, anchor: "middle",
    }));
  }
  for (const t of errs) {
    const y = ys(t);
    parts.push(text(area.x0 - 5, y + 2.3, t.toExponential(1), {
      size: 6.5, anchor: "end",
    }));
    parts.push(line(area.x0 - 3, y, area.x0, y, "#444", 0.8));
  }

  // fitted line: anchored at the log-log centroid, slope from the harness
  if (summary.slope !== null) {
    const slope = summary.slope;
    const cx = kns.reduce((a, k) => a + Math.log(k), 0) / kns.length;
    const cy = errs.reduce((a, e) => a + Math.log(e), 0) / errs.length;
    const ends = [xDom[0] * 1.1, xDom[1] / 1.1].map((k) => {
      const logE = cy + slope * (Math.log(k) - cx);
      return [k, Math.exp(logE)] as const;
    });
    parts.push(pathElement(
      polylinePath(ends.map(([k]) => k), ends.map(([, e]) => e), xs, ys),
      { color: "#888", width: 0.9, dash: "5,3" }));
    parts.push(text(area.x0 + 6, area.y0 + 10,
                    `slope ≈ ${slope.toFixed(2)}`, { size: 8.5 }));
  }

  points.forEach((p, i) => {
    const x = xs(p.kn);
    const y = ys(p.error);
    parts.push(
      `<circle cx="${px(x)}" cy="${px(y)}" r="2.4" fill="#0072b2"/>`);
  });
  parts.push(frame(area));
  return `<g>${parts.join("")}</g>`;
}
