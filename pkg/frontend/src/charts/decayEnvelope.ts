/**
 * Decay-envelope chart.
 *
 * Accepts either decay artifact layout:
 *
 * - kernel coefficients: each mode becomes a point at distance
 *   d = 1 + | |n| - sqrt(j) | from the cut sphere with its coefficient
 *   magnitude, on log-log axes, overlaid with the fitted reference curves
 *   C_l * d^(-l) for l = 1, 2, 4 (C_l = the smallest constant covering
 *   every plotted point).
 * - decay scans: pre-weighted transform magnitudes against the radial
 *   coordinate, log y, with the fitted supremum line per series.
 */

import type { Artifact } from "../csv.js";
import { num } from "../csv.js";
import { validateHeader } from "../schemas.js";
import {
  centerNote,
  finishChart,
  legend,
  makeFrame,
  PALETTE,
  polyline,
  px,
  sci,
  tag,
} from "../svg.js";

const WIDTH = 760;
const HEIGHT = 520;
const REF_EXPONENTS = [1, 2, 4];
const REF_SAMPLES = 64;

function clipDefs(frame: ReturnType<typeof makeFrame>): string {
  const rect = tag("rect", {
    x: px(frame.left),
    y: px(frame.top),
    width: px(frame.plotWidth),
    height: px(frame.plotHeight),
  });
  return tag("defs", {}, tag("clipPath", { id: "plot-clip" }, rect));
}

function renderKernelVariant(artifact: Artifact, source: string, n: number): string {
  const points: [number, number][] = [];
  for (const row of artifact.rows) {
    const j = num(row[4], "j");
    let normSq = 0;
    for (let axis = 0; axis < n; axis += 1) {
      const c = num(row[5 + axis], `n${axis + 1}`);
      normSq += c * c;
    }
    const mag = Math.hypot(num(row[5 + n], "re"), num(row[6 + n], "im"));
    if (j === 0 || mag <= 0) continue;
    points.push([1 + Math.abs(Math.sqrt(normSq) - Math.sqrt(j)), mag]);
  }

  const meta = artifact.metadata;
  const subtitleBits = ["table", "N", "R", "r", "M"]
    .filter((k) => meta[k] !== undefined)
    .map((k) => `${k}=${meta[k]}`);
  const title =
    `kernel coefficient decay — ${source}` +
    (subtitleBits.length > 0 ? ` (${subtitleBits.join(", ")})` : "");

  if (points.length === 0) {
    const frame = makeFrame(
      WIDTH,
      HEIGHT,
      title,
      { label: "1 + | |n| - sqrt(j) |", log: false, min: 0, max: 1 },
      { label: "|coefficient|", log: false, min: 0, max: 1 },
    );
    return finishChart(frame, [centerNote(frame, "no nonzero coefficients")]);
  }

  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const frame = makeFrame(
    WIDTH,
    HEIGHT,
    title,
    { label: "1 + | |n| - sqrt(j) |", log: true, min: Math.min(...xs), max: Math.max(...xs) },
    { label: "|coefficient|", log: true, min: Math.min(...ys), max: Math.max(...ys) },
  );

  const extra: string[] = [clipDefs(frame)];
  const dots = points
    .map(([d, mag]) =>
      tag("circle", {
        cx: px(frame.x(d)),
        cy: px(frame.y(mag)),
        r: "1.6",
        fill: PALETTE[0]!,
        "fill-opacity": "0.55",
        class: "point",
      }),
    )
    .join("");
  extra.push(tag("g", { class: "points" }, dots));

  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const entries: { label: string; color: string }[] = [
    { label: "coefficients", color: PALETTE[0]! },
  ];
  const curves: string[] = [];
  REF_EXPONENTS.forEach((l, i) => {
    const constant = Math.max(...points.map(([d, mag]) => mag * d ** l));
    const curve: [number, number][] = [];
    for (let k = 0; k < REF_SAMPLES; k += 1) {
      const t = k / (REF_SAMPLES - 1);
      const d = xMin * (xMax / xMin) ** t;
      curve.push([frame.x(d), frame.y(constant * d ** -l)]);
    }
    const color = PALETTE[(i + 1) % PALETTE.length]!;
    curves.push(
      polyline(curve, {
        stroke: color,
        "stroke-width": "1.5",
        "stroke-dasharray": "6 3",
        class: "ref",
      }),
    );
    entries.push({ label: `C_${l} d^-${l}, C=${sci(constant)}`, color });
  });
  extra.push(tag("g", { "clip-path": "url(#plot-clip)", class: "refs" }, curves.join("")));
  extra.push(...legend(frame, entries));
  return finishChart(frame, extra);
}

function renderScanVariant(artifact: Artifact, source: string): string {
  interface Series {
    label: string;
    points: [number, number][];
  }
  const series = new Map<string, Series>();
  for (const row of artifact.rows) {
    const lambda = num(row[1], "lambda");
    const eta = num(row[2], "eta_norm");
    const l = num(row[3], "l");
    const value = num(row[4], "weighted_abs");
    if (value <= 0) continue;
    const key = `${lambda}|${l}`;
    let entry = series.get(key);
    if (entry === undefined) {
      entry = { label: `lambda=${lambda} l=${l}`, points: [] };
      series.set(key, entry);
    }
    entry.points.push([eta, value]);
  }

  const title = `windowed transform decay — ${source}`;
  const all = [...series.values()].flatMap((s) => s.points);
  if (all.length === 0) {
    const frame = makeFrame(
      WIDTH,
      HEIGHT,
      title,
      { label: "radial coordinate", log: false, min: 0, max: 1 },
      { label: "weighted magnitude", log: false, min: 0, max: 1 },
    );
    return finishChart(frame, [centerNote(frame, "no data rows")]);
  }

  const frame = makeFrame(
    WIDTH,
    HEIGHT,
    title,
    {
      label: "radial coordinate",
      log: false,
      min: Math.min(...all.map((p) => p[0])),
      max: Math.max(...all.map((p) => p[0])),
    },
    {
      label: "weighted magnitude",
      log: true,
      min: Math.min(...all.map((p) => p[1])),
      max: Math.max(...all.map((p) => p[1])),
    },
  );

  const extra: string[] = [];
  const entries: { label: string; color: string }[] = [];
  [...series.values()].forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const pts = s.points.map(
      ([eta, v]) => [frame.x(eta), frame.y(v)] as [number, number],
    );
    extra.push(polyline(pts, { stroke: color, "stroke-width": "1.2", class: "series" }));
    const sup = Math.max(...s.points.map((p) => p[1]));
    extra.push(
      polyline(
        [
          [frame.left, frame.y(sup)],
          [frame.left + frame.plotWidth, frame.y(sup)],
        ],
        {
          stroke: color,
          "stroke-width": "1",
          "stroke-dasharray": "2 4",
          class: "sup",
        },
      ),
    );
    entries.push({ label: `${s.label} sup=${sci(sup)}`, color });
  });
  extra.push(...legend(frame, entries));
  return finishChart(frame, extra);
}

export function renderDecayEnvelope(artifact: Artifact, source: string): string {
  const match = validateHeader("decay-envelope", artifact.header);
  if (match.layout === "kernel-coefficients") {
    return renderKernelVariant(artifact, source, match.n);
  }
  return renderScanVariant(artifact, source);
}
