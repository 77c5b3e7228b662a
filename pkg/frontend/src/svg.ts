/**
 * Minimal deterministic SVG assembly: scales, ticks, polylines, axes.
 * All coordinates are rounded to fixed precision so byte-identical output
 * follows from identical inputs.
 */

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function logScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const inner = linearScale(
    [Math.log10(domain[0]), Math.log10(domain[1])],
    range,
  );
  const fn = ((v: number) => inner(Math.log10(v))) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

/** Round-valued ticks covering [min, max] with roughly `count` steps. */
export function niceTicks(min: number, max: number, count: number): number[] {
  const span = max - min || 1;
  const rough = span / Math.max(count, 1);
  const magnitude = Math.pow(10, Math.floor(Math.log10(rough)));
  const step =
    [1, 2, 5, 10].map((m) => m * magnitude).find((s) => s >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const COORD_DIGITS = 2;

export function px(v: number): string {
  const s = v.toFixed(COORD_DIGITS);
  return s === "-0.00" ? "0.00" : s;
}

export function polylinePath(
  xs: number[],
  ys: number[],
  xScale: Scale,
  yScale: Scale,
): string {
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    const cmd = i === 0 ? "M" : "L";
    parts.push(`${cmd}${px(xScale(xs[i]))} ${px(yScale(ys[i]))}`);
  }
  return parts.join("");
}

export interface PathStyle {
  color: string;
  width?: number;
  dash?: string;
  opacity?: number;
}

export function pathElement(d: string, style: PathStyle): string {
  let attrs = `d="${d}" fill="none" stroke="${style.color}"`;
  attrs += ` stroke-width="${style.width ?? 1.2}"`;
  if (style.dash) attrs += ` stroke-dasharray="${style.dash}"`;
  if (style.opacity !== undefined) attrs += ` opacity="${style.opacity}"`;
  return `<path ${attrs}/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  opts: { size?: number; fill?: string; anchor?: string; rotate?: boolean } = {},
): string {
  let attrs = `x="${px(x)}" y="${px(y)}" font-size="${opts.size ?? 8}"`;
  attrs += ` fill="${opts.fill ?? "#222"}"`;
  if (opts.anchor) attrs += ` text-anchor="${opts.anchor}"`;
  if (opts.rotate) attrs += ` transform="rotate(-90 ${px(x)} ${px(y)})"`;
  return `<text ${attrs}>${esc(content)}</text>`;
}

export function line(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  stroke: string,
  width = 0.5,
): string {
  return (
    `<line x1="${px(x1)}" y1="${px(y1)}" x2="${px(x2)}" y2="${px(y2)}"` +
    ` stroke="${stroke}" stroke-width="${width}"/>`
  );
}

/** Color cycle for per-Kn curves (colorblind-safe-ish). */
export const CURVE_COLORS = [
  "#0072b2",
  "#d55e00",
  "#009e73",
  "#cc79a7",
  "#e69f00",
  "#56b4e9",
];
