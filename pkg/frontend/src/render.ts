/**
 * Kind dispatch: artifact text in, SVG text out.
 *
 * Charts never recompute the mathematics behind an artifact — they plot
 * the columns as given, deriving only plot coordinates (distances to the
 * cut, magnitudes already present as columns) and displayed fit constants.
 */

import { parseArtifact } from "./csv.js";
import { renderDecayEnvelope } from "./charts/decayEnvelope.js";
import { renderRatioHistogram } from "./charts/ratioHistogram.js";
import { renderThresholdEnvelope } from "./charts/thresholdEnvelope.js";
import { renderTrajectory } from "./charts/trajectory.js";
import { renderVerdictTable } from "./charts/verdictTable.js";
import type { ChartKind } from "./schemas.js";

/**
 * Render one artifact to an SVG string.
 *
 * `source` is the display name used in the chart title (normally the
 * input's basename, never a full path, so renders relocate cleanly).
 */
export function renderArtifact(
  kind: ChartKind,
  text: string,
  source: string,
): string {
  switch (kind) {
    case "verdict-table":
      return renderVerdictTable(text, source);
    case "decay-envelope":
      return renderDecayEnvelope(parseArtifact(text), source);
    case "ratio-histogram":
      return renderRatioHistogram(parseArtifact(text), source);
    case "trajectory":
      return renderTrajectory(parseArtifact(text), source);
    case "threshold-envelope":
      return renderThresholdEnvelope(parseArtifact(text), source);
  }
}
