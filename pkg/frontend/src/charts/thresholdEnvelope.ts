/**
 * Threshold-envelope chart: per probe order, the magnitude of the smoothed
 * mean against the cut radius (thin line) together with its running tail
 * envelope (dashed), on log-log axes.  The per-order classification from
 * the artifact metadata is folded into the legend when present.
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
  tag,
} from "../svg.js";

const WIDTH = 760;
const HEIGHT = 520;

export function renderThresholdEnvelope(artifact: Artifact, source: string): string {
  const match = validateHeader("threshold-envelope", artifact.header);
  const n = match.n;

  interface Series {
    order: string;
    label: string;
    values: [number, number][];
    envelope: [number, number][];
  }
  const series = new Map<string, Series>();
  for (const row of artifact.rows) {
    const order = num(row[1], "s");
    const alpha = row[2] ?? "";
    const lambda = num(row[3], "lambda");
    const coords: number[] = [];
    for (let axis = 0; axis < n; axis += 1) {
      coords.push(num(row[4 + axis], `x${axis + 1}`));
    }
    const magnitude = num(row[6 + n], "abs");
    const envelope = num(row[7 + n], "envelope");
    const orderLabel = String(order);
    const key = `${orderLabel}|${alpha}|${coords.join(",")}`;
    let entry = series.get(key);
    if (entry === undefined) {
      const classification = artifact.metadata[`classification[${orderLabel}]`];
      const suffix = classification === undefined ? "" : ` (${classification})`;
      entry = {
        order: orderLabel,
        label: `s=${orderLabel}${suffix}`,
        values: [],
        envelope: [],
      };
      series.set(key, entry);
    }
    if (magnitude > 0) entry.values.push([lambda, magnitude]);
    if (envelope > 0) entry.envelope.push([lambda, envelope]);
  }

  const title = `threshold probes — ${source}`;
  const all = [...series.values()].flatMap((s) => [...s.values, ...s.envelope]);
  if (all.length === 0) {
    const frame = makeFrame(
      WIDTH,
      HEIGHT,
      title,
      { label: "lambda", log: false, min: 0, max: 1 },
      { label: "|mean|", log: false, min: 0, max: 1 },
    );
    return finishChart(frame, [centerNote(frame, "no data rows")]);
  }

  const frame = makeFrame(
    WIDTH,
    HEIGHT,
    title,
    {
      label: "lambda",
      log: true,
      min: Math.min(...all.map((p) => p[0])),
      max: Math.max(...all.map((p) => p[0])),
    },
    {
      label: "|mean|",
      log: true,
      min: Math.min(...all.map((p) => p[1])),
      max: Math.max(...all.map((p) => p[1])),
    },
  );

  const extra: string[] = [];
  const entries: { label: string; color: string }[] = [];
  const project = (pts: [number, number][]): [number, number][] =>
    pts
      .slice()
      .sort((a, b) => a[0] - b[0])
      .map(([lambda, v]) => [frame.x(lambda), frame.y(v)] as [number, number]);

  [...series.values()].forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    if (s.values.length > 0) {
      extra.push(
        polyline(project(s.values), {
          stroke: color,
          "stroke-width": "1",
          "stroke-opacity": "0.6",
          class: "values",
        }),
      );
    }
    if (s.envelope.length > 0) {
      extra.push(
        polyline(project(s.envelope), {
          stroke: color,
          "stroke-width": "2",
          "stroke-dasharray": "7 3",
          class: "envelope",
        }),
      );
    }
    entries.push({ label: s.label, color });
  });
  extra.push(...legend(frame, entries));
  return finishChart(frame, extra);
}
