/**
 * Trajectory chart: partial-sum magnitude against the cut radius, one
 * polyline per (trial, probe point) series.
 *
 * A header-only artifact is a valid render: the chart keeps its axes and
 * notes the absence of data instead of failing.
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
  tag,
} from "../svg.js";

const WIDTH = 760;
const HEIGHT = 520;
const LEGEND_CAP = 10;

export function renderTrajectory(artifact: Artifact, source: string): string {
  const match = validateHeader("trajectory", artifact.header);
  const n = match.n;

  interface Series {
    label: string;
    points: [number, number][];
  }
  const series = new Map<string, Series>();
  for (const row of artifact.rows) {
    const trial = num(row[0], "trial");
    const lambda = num(row[1], "lambda");
    const coords: number[] = [];
    for (let axis = 0; axis < n; axis += 1) {
      coords.push(num(row[2 + axis], `x${axis + 1}`));
    }
    const magnitude = num(row[4 + n], "abs");
    const key = `${trial}@${coords.join(",")}`;
    let entry = series.get(key);
    if (entry === undefined) {
      entry = { label: `trial ${trial} at (${coords.join(", ")})`, points: [] };
      series.set(key, entry);
    }
    entry.points.push([lambda, magnitude]);
  }

  const title = `partial-sum trajectories — ${source}`;
  const all = [...series.values()].flatMap((s) => s.points);
  if (all.length === 0) {
    const frame = makeFrame(
      WIDTH,
      HEIGHT,
      title,
      { label: "lambda", log: false, min: 0, max: 1 },
      { label: "|partial sum|", log: false, min: 0, max: 1 },
    );
    return finishChart(frame, [centerNote(frame, "no data rows")]);
  }

  const frame = makeFrame(
    WIDTH,
    HEIGHT,
    title,
    {
      label: "lambda",
      log: false,
      min: Math.min(...all.map((p) => p[0])),
      max: Math.max(...all.map((p) => p[0])),
    },
    {
      label: "|partial sum|",
      log: false,
      min: 0,
      max: Math.max(...all.map((p) => p[1])),
    },
  );

  const extra: string[] = [];
  const entries: { label: string; color: string }[] = [];
  [...series.values()].forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const pts = s.points
      .slice()
      .sort((a, b) => a[0] - b[0])
      .map(([lambda, v]) => [frame.x(lambda), frame.y(v)] as [number, number]);
    extra.push(
      polyline(pts, { stroke: color, "stroke-width": "1.5", class: "series" }),
    );
    const markers = pts
      .map(([cx, cy]) =>
        tag("circle", { cx: px(cx), cy: px(cy), r: "2.5", fill: color, class: "marker" }),
      )
      .join("");
    extra.push(tag("g", {}, markers));
    if (entries.length < LEGEND_CAP) {
      entries.push({ label: s.label, color });
    } else if (entries.length === LEGEND_CAP) {
      entries.push({ label: `… ${series.size - LEGEND_CAP} more`, color: "#888888" });
    }
  });
  extra.push(...legend(frame, entries));
  return finishChart(frame, extra);
}
