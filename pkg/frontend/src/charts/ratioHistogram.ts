/**
 * Ratio-histogram chart: the experiment-ratio artifact binned per band.
 *
 * Bands share one fixed binning of the observed ratio range, with each
 * band's bars drawn side by side inside a bin so count distributions can
 * be compared across band doublings.
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
  px,
  tag,
} from "../svg.js";

const WIDTH = 760;
const HEIGHT = 520;
const BIN_COUNT = 12;

export function renderRatioHistogram(artifact: Artifact, source: string): string {
  validateHeader("ratio-histogram", artifact.header);

  const byBand = new Map<number, number[]>();
  for (const row of artifact.rows) {
    const band = num(row[1], "band");
    const ratio = num(row[3], "ratio");
    const bucket = byBand.get(band);
    if (bucket === undefined) {
      byBand.set(band, [ratio]);
    } else {
      bucket.push(ratio);
    }
  }

  const title = `maximal-sum ratio histogram — ${source}`;
  const values = [...byBand.values()].flat();
  if (values.length === 0) {
    const frame = makeFrame(
      WIDTH,
      HEIGHT,
      title,
      { label: "ratio", log: false, min: 0, max: 1 },
      { label: "count", log: false, min: 0, max: 1 },
    );
    return finishChart(frame, [centerNote(frame, "no data rows")]);
  }

  const lo = Math.min(...values);
  let hi = Math.max(...values);
  if (hi <= lo) hi = lo + 1;
  const width = (hi - lo) / BIN_COUNT;

  const bands = [...byBand.keys()];
  const counts = bands.map((band) => {
    const bins = new Array<number>(BIN_COUNT).fill(0);
    for (const value of byBand.get(band)!) {
      const index = Math.min(Math.floor((value - lo) / width), BIN_COUNT - 1);
      bins[index] = (bins[index] ?? 0) + 1;
    }
    return bins;
  });
  const maxCount = Math.max(...counts.flat());

  const frame = makeFrame(
    WIDTH,
    HEIGHT,
    title,
    { label: "ratio", log: false, min: lo, max: hi },
    { label: "count", log: false, min: 0, max: maxCount },
  );

  const extra: string[] = [];
  const baseline = frame.y(0);
  bands.forEach((band, bandIndex) => {
    const color = PALETTE[bandIndex % PALETTE.length]!;
    const bars: string[] = [];
    counts[bandIndex]!.forEach((count, bin) => {
      if (count === 0) return;
      const binLeft = frame.x(lo + bin * width);
      const binRight = frame.x(lo + (bin + 1) * width);
      const slot = (binRight - binLeft) / bands.length;
      const xPos = binLeft + slot * bandIndex;
      const yPos = frame.y(count);
      bars.push(
        tag("rect", {
          x: px(xPos + 0.5),
          y: px(yPos),
          width: px(Math.max(slot - 1, 0.5)),
          height: px(baseline - yPos),
          fill: color,
          "fill-opacity": "0.8",
          class: "bar",
        }),
      );
    });
    extra.push(tag("g", { class: `band-${band}` }, bars.join("")));
  });

  extra.push(
    ...legend(
      frame,
      bands.map((band, i) => ({
        label: `band ${band} (n=${byBand.get(band)!.length})`,
        color: PALETTE[i % PALETTE.length]!,
      })),
    ),
  );
  return finishChart(frame, extra);
}
