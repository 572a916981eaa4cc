/**
 * Plot-job lists.
 *
 * A job-list file is a JSON array of jobs, each naming one input artifact
 * (CSV, or JSON for verdict tables), the chart kind to render, and the
 * output image path.  Jobs are independent; the batch runner keeps going
 * when one fails.
 */

import { z } from "zod";
import { CHART_KINDS, type ChartKind } from "./schemas.js";

export interface PlotJob {
  input: string;
  kind: ChartKind;
  output: string;
}

const JobSchema = z
  .object({
    input: z.string().min(1),
    kind: z.enum(CHART_KINDS as [ChartKind, ...ChartKind[]]),
    output: z.string().min(1),
  })
  .strict();

const JobListSchema = z.array(JobSchema);

export class JobListError extends Error {}

export function parseJobList(text: string): PlotJob[] {
  let payload: unknown;
  try {
    payload = JSON.parse(text);
  } catch (error) {
    throw new JobListError(
      `job list is not valid JSON: ${(error as Error).message}`,
    );
  }
  const result = JobListSchema.safeParse(payload);
  if (!result.success) {
    const issues = result.error.issues
      .map((issue) => `${issue.path.join(".") || "(root)"}: ${issue.message}`)
      .join("; ");
    throw new JobListError(`job list is invalid: ${issues}`);
  }
  return result.data;
}
