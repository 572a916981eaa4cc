/**
 * Deterministic SVG assembly.
 *
 * Every emitted byte is a pure function of the chart data: coordinates are
 * formatted with a fixed precision, nothing reads the clock or the host,
 * and series colors come from a fixed palette.  Rendering the same input
 * twice must produce identical files.
 */

import { scaleLinear, scaleLog, type ScaleContinuousNumeric } from "d3-scale";

export const PALETTE = [
  "#4269d0",
  "#efb118",
  "#ff725c",
  "#6cc5b0",
  "#3ca951",
  "#ff8ab7",
  "#a463f2",
  "#97bbf5",
  "#9c6b4e",
  "#9498a0",
] as const;

export const PASS_COLOR = "#2e8540";
export const FAIL_COLOR = "#c0392b";

/** Fixed-precision pixel coordinate. */
export function px(value: number): string {
  return value.toFixed(2);
}

/** Data value for legends and labels: stable scientific notation. */
export function sci(value: number): string {
  return value.toExponential(3);
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function tag(
  name: string,
  attrs: Record<string, string>,
  body?: string,
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${esc(v)}"`)
    .join("");
  if (body === undefined) {
    return `<${name}${parts}/>`;
  }
  return `<${name}${parts}>${body}</${name}>`;
}

export function textEl(
  x: number,
  y: number,
  content: string,
  attrs: Record<string, string> = {},
): string {
  return tag("text", { x: px(x), y: px(y), ...attrs }, esc(content));
}

export type Scale = ScaleContinuousNumeric<number, number>;

export interface AxisSpec {
  label: string;
  log: boolean;
  /** Data range; widened internally when degenerate. */
  min: number;
  max: number;
}

export interface Frame {
  width: number;
  height: number;
  left: number;
  top: number;
  plotWidth: number;
  plotHeight: number;
  x: Scale;
  y: Scale;
  /** Axes, gridlines, labels, and the plot border. */
  body: string[];
}

const MARGIN = { top: 44, right: 24, bottom: 52, left: 72 };

function makeScale(spec: AxisSpec, range: [number, number]): Scale {
  let { min, max } = spec;
  if (spec.log) {
    if (!(min > 0)) min = 1e-12;
    if (!(max > min)) max = min * 10;
    return scaleLog().domain([min, max]).range(range).nice();
  }
  if (!Number.isFinite(min) || !Number.isFinite(max)) {
    min = 0;
    max = 1;
  }
  if (max <= min) {
    max = min + 1;
  }
  return scaleLinear().domain([min, max]).range(range).nice();
}

function axisTicks(scale: Scale, log: boolean): { value: number; label: string }[] {
  const count = log ? 6 : 7;
  const values = scale.ticks(count);
  const format = scale.tickFormat(count);
  const ticks = values
    .map((value) => ({ value, label: format(value) }))
    .filter((t) => t.label !== "");
  // A log domain inside one decade can leave every default label blank;
  // fall back to labelling each tick explicitly.
  if (ticks.length === 0) {
    return values.map((value) => ({ value, label: sci(value) }));
  }
  return ticks;
}

/** Build the chart skeleton: title, axes with ticks and gridlines. */
export function makeFrame(
  width: number,
  height: number,
  title: string,
  xSpec: AxisSpec,
  ySpec: AxisSpec,
): Frame {
  const plotWidth = width - MARGIN.left - MARGIN.right;
  const plotHeight = height - MARGIN.top - MARGIN.bottom;
  const x = makeScale(xSpec, [MARGIN.left, MARGIN.left + plotWidth]);
  const y = makeScale(ySpec, [MARGIN.top + plotHeight, MARGIN.top]);

  const body: string[] = [];
  body.push(
    textEl(width / 2, 24, title, {
      "text-anchor": "middle",
      "font-size": "15",
      "font-weight": "bold",
      class: "title",
    }),
  );
  body.push(
    tag("rect", {
      x: px(MARGIN.left),
      y: px(MARGIN.top),
      width: px(plotWidth),
      height: px(plotHeight),
      fill: "none",
      stroke: "#888888",
      "stroke-width": "1",
    }),
  );

  for (const t of axisTicks(x, xSpec.log)) {
    const cx = x(t.value);
    body.push(
      tag("line", {
        x1: px(cx),
        y1: px(MARGIN.top),
        x2: px(cx),
        y2: px(MARGIN.top + plotHeight),
        stroke: "#dddddd",
        "stroke-width": "1",
        class: "grid",
      }),
    );
    body.push(
      textEl(cx, MARGIN.top + plotHeight + 18, t.label, {
        "text-anchor": "middle",
        "font-size": "11",
        class: "x-tick",
      }),
    );
  }
  for (const t of axisTicks(y, ySpec.log)) {
    const cy = y(t.value);
    body.push(
      tag("line", {
        x1: px(MARGIN.left),
        y1: px(cy),
        x2: px(MARGIN.left + plotWidth),
        y2: px(cy),
        stroke: "#dddddd",
        "stroke-width": "1",
        class: "grid",
      }),
    );
    body.push(
      textEl(MARGIN.left - 8, cy + 4, t.label, {
        "text-anchor": "end",
        "font-size": "11",
        class: "y-tick",
      }),
    );
  }

  body.push(
    textEl(MARGIN.left + plotWidth / 2, height - 14, xSpec.label, {
      "text-anchor": "middle",
      "font-size": "12",
      class: "x-label",
    }),
  );
  body.push(
    tag(
      "text",
      {
        x: px(18),
        y: px(MARGIN.top + plotHeight / 2),
        "text-anchor": "middle",
        "font-size": "12",
        class: "y-label",
        transform: `rotate(-90 18 ${px(MARGIN.top + plotHeight / 2)})`,
      },
      esc(ySpec.label),
    ),
  );

  return {
    width,
    height,
    left: MARGIN.left,
    top: MARGIN.top,
    plotWidth,
    plotHeight,
    x,
    y,
    body,
  };
}

export function polyline(
  points: [number, number][],
  attrs: Record<string, string>,
): string {
  const coords = points.map(([a, b]) => `${px(a)},${px(b)}`).join(" ");
  return tag("polyline", { points: coords, fill: "none", ...attrs });
}

export function legend(
  frame: Frame,
  entries: { label: string; color: string }[],
): string[] {
  const out: string[] = [];
  entries.forEach((entry, i) => {
    const yPos = frame.top + 10 + i * 16;
    const xPos = frame.left + frame.plotWidth - 10;
    out.push(
      tag("rect", {
        x: px(xPos - 10),
        y: px(yPos - 8),
        width: "10",
        height: "10",
        fill: entry.color,
        class: "legend-swatch",
      }),
    );
    out.push(
      textEl(xPos - 16, yPos, entry.label, {
        "text-anchor": "end",
        "font-size": "11",
        class: "legend-label",
      }),
    );
  });
  return out;
}

/** Note drawn in the middle of the plot area (used for empty datasets). */
export function centerNote(frame: Frame, message: string): string {
  return textEl(
    frame.left + frame.plotWidth / 2,
    frame.top + frame.plotHeight / 2,
    message,
    { "text-anchor": "middle", "font-size": "13", fill: "#666666", class: "note" },
  );
}

export function svgDocument(
  width: number,
  height: number,
  parts: string[],
): string {
  const header =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}"` +
    ` height="${height}" viewBox="0 0 ${width} ${height}"` +
    ` font-family="Helvetica, Arial, sans-serif">`;
  const background = tag("rect", {
    x: "0",
    y: "0",
    width: String(width),
    height: String(height),
    fill: "#ffffff",
  });
  return [header, background, ...parts, "</svg>", ""].join("\n");
}

export function finishChart(frame: Frame, extra: string[]): string {
  return svgDocument(frame.width, frame.height, [...frame.body, ...extra]);
}
