/**
 * Verdict-table image: the lemma verdicts of a verification run as a
 * colored summary table.
 *
 * Accepts both verdict JSON shapes the producer emits: a campaign file
 * with a reports list and an overall flag, and a single-experiment file
 * with one report.  Pass rows tint green, fail rows red; the full claim
 * text travels along as a tooltip.
 */

import { z } from "zod";
import { SchemaError } from "../schemas.js";
import { esc, FAIL_COLOR, PASS_COLOR, px, svgDocument, tag, textEl } from "../svg.js";

const ReportSchema = z
  .object({
    lemma: z.string(),
    claim: z.string(),
    verdict: z.enum(["pass", "fail"]),
  })
  .passthrough();

const CampaignSchema = z
  .object({
    schema: z.number(),
    passed: z.boolean(),
    reports: z.array(ReportSchema),
  })
  .passthrough();

const SingleSchema = z
  .object({
    schema: z.number(),
    report: ReportSchema,
  })
  .passthrough();

type Report = z.infer<typeof ReportSchema>;

const WIDTH = 980;
const ROW_HEIGHT = 26;
const LEMMA_X = 28;
const VERDICT_X = 220;
const CLAIM_X = 300;
const CLAIM_LIMIT = 88;

function parseVerdicts(text: string): { reports: Report[]; passed: boolean } {
  let payload: unknown;
  try {
    payload = JSON.parse(text);
  } catch (error) {
    throw new SchemaError(
      `verdict input is not valid JSON: ${(error as Error).message}`,
      [],
    );
  }
  const campaign = CampaignSchema.safeParse(payload);
  if (campaign.success) {
    return { reports: campaign.data.reports, passed: campaign.data.passed };
  }
  const single = SingleSchema.safeParse(payload);
  if (single.success) {
    return {
      reports: [single.data.report],
      passed: single.data.report.verdict === "pass",
    };
  }
  const missing = campaign.error.issues
    .filter((issue) => issue.code === "invalid_type" && issue.received === "undefined")
    .map((issue) => issue.path.join("."));
  throw new SchemaError(
    `verdict JSON does not match the campaign or single-report shape` +
      (missing.length > 0 ? `; missing keys: ${missing.join(", ")}` : ""),
    missing,
  );
}

function truncate(text: string): string {
  if (text.length <= CLAIM_LIMIT) return text;
  return `${text.slice(0, CLAIM_LIMIT - 1)}…`;
}

export function renderVerdictTable(text: string, source: string): string {
  const { reports, passed } = parseVerdicts(text);

  const headerY = 64;
  const firstRowY = headerY + 12;
  const summaryY = firstRowY + reports.length * ROW_HEIGHT + 34;
  const height = summaryY + 28;
  const parts: string[] = [];

  parts.push(
    textEl(WIDTH / 2, 30, `verification verdicts — ${source}`, {
      "text-anchor": "middle",
      "font-size": "15",
      "font-weight": "bold",
      class: "title",
    }),
  );
  parts.push(
    textEl(LEMMA_X, headerY, "lemma", { "font-size": "12", "font-weight": "bold" }),
  );
  parts.push(
    textEl(VERDICT_X, headerY, "verdict", { "font-size": "12", "font-weight": "bold" }),
  );
  parts.push(
    textEl(CLAIM_X, headerY, "claim", { "font-size": "12", "font-weight": "bold" }),
  );
  parts.push(
    tag("line", {
      x1: px(LEMMA_X - 8),
      y1: px(headerY + 8),
      x2: px(WIDTH - 20),
      y2: px(headerY + 8),
      stroke: "#888888",
      "stroke-width": "1",
    }),
  );

  reports.forEach((report, i) => {
    const rowTop = firstRowY + i * ROW_HEIGHT;
    const textY = rowTop + ROW_HEIGHT - 8;
    const ok = report.verdict === "pass";
    const color = ok ? PASS_COLOR : FAIL_COLOR;
    parts.push(
      tag("rect", {
        x: px(LEMMA_X - 8),
        y: px(rowTop),
        width: px(WIDTH - 20 - (LEMMA_X - 8)),
        height: px(ROW_HEIGHT),
        fill: color,
        "fill-opacity": "0.10",
        class: `row-${report.verdict}`,
      }),
    );
    parts.push(
      textEl(LEMMA_X, textY, report.lemma, {
        "font-size": "12",
        "font-family": "monospace",
        class: "lemma",
      }),
    );
    parts.push(
      textEl(VERDICT_X, textY, report.verdict, {
        "font-size": "12",
        "font-weight": "bold",
        fill: color,
        class: "verdict",
      }),
    );
    parts.push(
      tag(
        "text",
        { x: px(CLAIM_X), y: px(textY), "font-size": "12", class: "claim" },
        esc(truncate(report.claim)) + tag("title", {}, esc(report.claim)),
      ),
    );
  });

  const overallColor = passed ? PASS_COLOR : FAIL_COLOR;
  parts.push(
    textEl(
      LEMMA_X,
      summaryY,
      `overall: ${passed ? "pass" : "fail"} (${reports.length} ` +
        `${reports.length === 1 ? "lemma" : "lemmas"})`,
      {
        "font-size": "13",
        "font-weight": "bold",
        fill: overallColor,
        class: "overall",
      },
    ),
  );

  return svgDocument(WIDTH, height, parts);
}
