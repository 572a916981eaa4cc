/**
 * Batch renderer: `node dist/cli.js <job-list.json>`.
 *
 * Runs every job in the list in order, in one process.  Jobs are
 * independent: a failing job is reported and the batch continues.  Exit
 * codes: 0 when every job rendered, 2 when any failure was a validation
 * problem (bad job list, schema mismatch, malformed artifact, non-SVG
 * output path), 1 when the only failures were IO.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { CsvError } from "./csv.js";
import { JobListError, parseJobList } from "./job.js";
import { renderArtifact } from "./render.js";
import { SchemaError } from "./schemas.js";

const USAGE = "usage: report_plots <job-list.json>";

type Failure = "validation" | "io";

function classify(error: unknown): Failure {
  if (error instanceof SchemaError || error instanceof CsvError) {
    return "validation";
  }
  return "io";
}

export function main(argv: string[]): number {
  if (argv[0] === "--help" || argv[0] === "-h") {
    console.error(USAGE);
    return 0;
  }
  if (argv.length !== 1) {
    console.error(USAGE);
    return 2;
  }
  const listPath = argv[0]!;

  let listText: string;
  try {
    listText = fs.readFileSync(listPath, "utf8");
  } catch (error) {
    console.error(`error: cannot read job list ${listPath}: ${(error as Error).message}`);
    return 1;
  }

  let jobs;
  try {
    jobs = parseJobList(listText);
  } catch (error) {
    if (error instanceof JobListError) {
      console.error(`error: ${error.message}`);
      return 2;
    }
    throw error;
  }

  let rendered = 0;
  const failures: Failure[] = [];
  for (const job of jobs) {
    try {
      if (!job.output.endsWith(".svg")) {
        throw new SchemaError(
          `output path must end in .svg, got ${job.output}`,
          [],
        );
      }
      const text = fs.readFileSync(job.input, "utf8");
      const svg = renderArtifact(job.kind, text, path.basename(job.input));
      fs.mkdirSync(path.dirname(path.resolve(job.output)), { recursive: true });
      fs.writeFileSync(job.output, svg, "utf8");
      console.log(`rendered ${job.output} (${job.kind} of ${job.input})`);
      rendered += 1;
    } catch (error) {
      const failure = classify(error);
      failures.push(failure);
      console.log(
        `failed ${job.output} (${failure}): ${(error as Error).message}`,
      );
    }
  }

  console.error(`report_plots: ${rendered}/${jobs.length} jobs rendered`);
  if (failures.includes("validation")) return 2;
  if (failures.length > 0) return 1;
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  path.resolve(process.argv[1]) === fileURLToPath(import.meta.url);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
