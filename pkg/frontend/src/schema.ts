/**
 * Parsers for the solver's output files.
 *
 * Expected inputs (produced by the `phonodiff` CLI):
 *   profiles/diffusion_kn{kn}.csv   header "x,rho"
 *   profiles/reference_kn{kn}.csv   header "x,T"
 *   summary.csv                     header "kn,error,mode,phi,example"
 *   summary.json                    slope, fit residual, per-point records
 *
 * Schema violations raise errors naming the offending column.
 */

export interface ProfileCurve {
  x: number[];
  y: number[];
}

export interface SummaryPoint {
  kn: number;
  error: number | null;
  failure?: string | null;
}

export interface Summary {
  slope: number | null;
  fitResidual: number | null;
  mode: string;
  phi: string;
  example: string;
  points: SummaryPoint[];
}

export class SchemaError extends Error {}

function splitCsv(text: string): string[][] {
  return text
    .trim()
    .split(/\r?\n/)
    .map((line) => line.split(","));
}

function parseNumericColumn(
  rows: string[][],
  index: number,
  name: string,
  file: string,
): number[] {
  return rows.map((cells, i) => {
    const raw = cells[index];
    const value = Number(raw);
    if (raw === undefined || raw === "" || !Number.isFinite(value)) {
      throw new SchemaError(
        `${file}: column "${name}" has a non-numeric value ${JSON.stringify(
          raw,
        )} on data row ${i + 1}`,
      );
    }
    return value;
  });
}

/** Parse a two-column profile file and check its header. */
export function parseProfileCsv(
  text: string,
  expectedHeader: [string, string],
  file: string,
): ProfileCurve {
  const rows = splitCsv(text);
  if (rows.length < 2) {
    throw new SchemaError(`${file}: no data rows`);
  }
  const header = rows[0];
  for (let i = 0; i < 2; i++) {
    if (header[i] !== expectedHeader[i]) {
      throw new SchemaError(
        `${file}: expected column ${i + 1} to be "${expectedHeader[i]}", ` +
          `found "${header[i] ?? ""}"`,
      );
    }
  }
  const data = rows.slice(1);
  return {
    x: parseNumericColumn(data, 0, expectedHeader[0], file),
    y: parseNumericColumn(data, 1, expectedHeader[1], file),
  };
}

export interface SummaryCsvRow {
  kn: number;
  error: number;
  mode: string;
  phi: string;
  example: string;
}

const SUMMARY_HEADER = ["kn", "error", "mode", "phi", "example"];

export function parseSummaryCsv(text: string, file: string): SummaryCsvRow[] {
  const rows = splitCsv(text);
  const header = rows[0] ?? [];
  SUMMARY_HEADER.forEach((name, i) => {
    if (header[i] !== name) {
      throw new SchemaError(
        `${file}: expected column ${i + 1} to be "${name}", found "${
          header[i] ?? ""
        }"`,
      );
    }
  });
  const data = rows.slice(1);
  const kn = parseNumericColumn(data, 0, "kn", file);
  const error = parseNumericColumn(data, 1, "error", file);
  return data.map((cells, i) => ({
    kn: kn[i],
    error: error[i],
    mode: cells[2],
    phi: cells[3],
    example: cells[4],
  }));
}

export function parseSummaryJson(text: string, file: string): Summary {
  let raw: any;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new SchemaError(`${file}: not valid JSON (${err})`);
  }
  if (typeof raw !== "object" || raw === null || !Array.isArray(raw.points)) {
    throw new SchemaError(`${file}: missing "points" array`);
  }
  const points: SummaryPoint[] = raw.points.map((p: any, i: number) => {
    if (typeof p.kn !== "number") {
      throw new SchemaError(`${file}: points[${i}].kn is not a number`);
    }
    if (p.error !== null && typeof p.error !== "number") {
      throw new SchemaError(`${file}: points[${i}].error is not a number`);
    }
    return { kn: p.kn, error: p.error, failure: p.failure ?? null };
  });
  const config = raw.config ?? {};
  return {
    slope: typeof raw.slope === "number" ? raw.slope : null,
    fitResidual:
      typeof raw.fit_residual === "number" ? raw.fit_residual : null,
    mode: String(config.mode ?? ""),
    phi: typeof config.phi === "string" ? config.phi : "custom",
    example: String(config.example ?? ""),
    points,
  };
}
