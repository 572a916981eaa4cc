/**
 * Header layouts of the artifact CSV schemas, and kind-aware validation.
 *
 * The layouts mirror the producer's contract exactly:
 *
 *   kernel coefficients  N, R, r, M, j, n1..nN, re, im
 *   decay scans          N, lambda, eta_norm, l, weighted_abs
 *   trajectories         trial, lambda, x1..xN, re, im, abs
 *   threshold probes     N, s, alpha, lambda, x1..xN, re, im, abs, envelope
 *   experiment ratios    N, band, trial, ratio
 *
 * Each chart kind accepts exactly the layouts listed in KIND_LAYOUTS; a
 * header that matches none of them is refused with the missing columns
 * spelled out per candidate layout.
 */

export type ChartKind =
  | "decay-envelope"
  | "ratio-histogram"
  | "trajectory"
  | "threshold-envelope"
  | "verdict-table";

export const CHART_KINDS: readonly ChartKind[] = [
  "decay-envelope",
  "ratio-histogram",
  "trajectory",
  "threshold-envelope",
  "verdict-table",
];

export class SchemaError extends Error {
  constructor(
    message: string,
    readonly missing: string[],
  ) {
    super(message);
  }
}

export function axisColumns(prefix: string, n: number): string[] {
  return Array.from({ length: n }, (_, i) => `${prefix}${i + 1}`);
}

export function coeffColumns(n: number): string[] {
  return ["N", "R", "r", "M", "j", ...axisColumns("n", n), "re", "im"];
}

export function decayColumns(): string[] {
  return ["N", "lambda", "eta_norm", "l", "weighted_abs"];
}

export function trajectoryColumns(n: number): string[] {
  return ["trial", "lambda", ...axisColumns("x", n), "re", "im", "abs"];
}

export function probeColumns(n: number): string[] {
  return ["N", "s", "alpha", "lambda", ...axisColumns("x", n), "re", "im", "abs", "envelope"];
}

export function ratioColumns(): string[] {
  return ["N", "band", "trial", "ratio"];
}

/** Count consecutive prefix1, prefix2, ... columns present in the header. */
function countAxes(header: string[], prefix: string): number {
  let n = 0;
  while (header.includes(`${prefix}${n + 1}`)) n += 1;
  return Math.max(n, 1);
}

interface Layout {
  name: string;
  expected: (header: string[]) => string[];
}

const LAYOUTS: Record<string, Layout> = {
  "kernel-coefficients": {
    name: "kernel-coefficients",
    expected: (header) => coeffColumns(countAxes(header, "n")),
  },
  "decay-scan": {
    name: "decay-scan",
    expected: () => decayColumns(),
  },
  trajectory: {
    name: "trajectory",
    expected: (header) => trajectoryColumns(countAxes(header, "x")),
  },
  "threshold-probes": {
    name: "threshold-probes",
    expected: (header) => probeColumns(countAxes(header, "x")),
  },
  ratios: {
    name: "ratios",
    expected: () => ratioColumns(),
  },
};

export const KIND_LAYOUTS: Record<Exclude<ChartKind, "verdict-table">, string[]> = {
  "decay-envelope": ["kernel-coefficients", "decay-scan"],
  "ratio-histogram": ["ratios"],
  trajectory: ["trajectory"],
  "threshold-envelope": ["threshold-probes"],
};

function headerMatches(expected: string[], header: string[]): boolean {
  return (
    expected.length === header.length &&
    expected.every((column, i) => header[i] === column)
  );
}

export interface HeaderMatch {
  layout: string;
  /** Inferred axis count for layouts with per-axis columns. */
  n: number;
}

/**
 * Check a CSV header against a chart kind.
 *
 * Returns which accepted layout matched; throws SchemaError naming the
 * kind and listing, for every layout the kind accepts, the expected
 * columns that the header does not supply.
 */
export function validateHeader(
  kind: Exclude<ChartKind, "verdict-table">,
  header: string[],
): HeaderMatch {
  const candidates = KIND_LAYOUTS[kind];
  const complaints: string[] = [];
  const allMissing: string[] = [];
  for (const layoutName of candidates) {
    const layout = LAYOUTS[layoutName]!;
    const expected = layout.expected(header);
    if (headerMatches(expected, header)) {
      const prefix = layoutName === "kernel-coefficients" ? "n" : "x";
      return { layout: layoutName, n: countAxes(header, prefix) };
    }
    const missing = expected.filter((column) => !header.includes(column));
    allMissing.push(...missing);
    const detail =
      missing.length > 0
        ? `missing columns: ${missing.join(", ")}`
        : `columns out of order or extra; expected exactly: ${expected.join(", ")}`;
    complaints.push(`${layoutName} (${detail})`);
  }
  throw new SchemaError(
    `header does not match the ${kind} chart kind; accepted layouts: ${complaints.join("; ")}`,
    allMissing,
  );
}
