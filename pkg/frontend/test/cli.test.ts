import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

const ROOT = fileURLToPath(new URL("..", import.meta.url));
const CLI = path.join(ROOT, "dist", "cli.js");
const FIXTURES = path.join(ROOT, "test", "fixtures");

let workDir: string;

beforeAll(() => {
  workDir = fs.mkdtempSync(path.join(os.tmpdir(), "report-plots-"));
});

afterAll(() => {
  fs.rmSync(workDir, { recursive: true, force: true });
});

interface RunResult {
  status: number | null;
  stdout: string;
  stderr: string;
}

function run(args: string[]): RunResult {
  const result = spawnSync("node", [CLI, ...args], {
    cwd: ROOT,
    encoding: "utf8",
  });
  return { status: result.status, stdout: result.stdout, stderr: result.stderr };
}

function writeJobs(name: string, jobs: unknown): string {
  const file = path.join(workDir, name);
  fs.writeFileSync(file, JSON.stringify(jobs), "utf8");
  return file;
}

describe("batch rendering", () => {
  it("renders every kind from the fixtures and exits 0", () => {
    const jobs = [
      ["ball.csv", "decay-envelope", "ball.svg"],
      ["decay.csv", "decay-envelope", "decay.svg"],
      ["ratios.csv", "ratio-histogram", "ratios.svg"],
      ["trajectory.csv", "trajectory", "trajectory.svg"],
      ["trajectory-empty.csv", "trajectory", "empty.svg"],
      ["probes.csv", "threshold-envelope", "probes.svg"],
      ["verdicts-pass.json", "verdict-table", "verdicts.svg"],
    ].map(([input, kind, output]) => ({
      input: path.join(FIXTURES, input!),
      kind,
      output: path.join(workDir, "out", output!),
    }));
    const list = writeJobs("all.json", jobs);

    const result = run([list]);
    expect(result.status).toBe(0);
    expect(result.stderr).toContain("report_plots: 7/7 jobs rendered");
    for (const job of jobs) {
      expect(fs.existsSync(job.output)).toBe(true);
      const svg = fs.readFileSync(job.output, "utf8");
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.endsWith("</svg>\n")).toBe(true);
    }
    // The header-only trajectory rendered as an empty-axes chart.
    const empty = fs.readFileSync(path.join(workDir, "out", "empty.svg"), "utf8");
    expect(empty).toContain("no data rows");
  });

  it("re-renders byte-identical outputs", () => {
    const output = path.join(workDir, "rerun", "ball.svg");
    const list = writeJobs("rerun.json", [
      {
        input: path.join(FIXTURES, "ball.csv"),
        kind: "decay-envelope",
        output,
      },
    ]);
    expect(run([list]).status).toBe(0);
    const first = fs.readFileSync(output);
    expect(run([list]).status).toBe(0);
    const second = fs.readFileSync(output);
    expect(second.equals(first)).toBe(true);
  });

  it("keeps going after a failed job and exits 2 on schema mismatch", () => {
    const good = path.join(workDir, "mix-good.svg");
    const list = writeJobs("mix.json", [
      {
        input: path.join(FIXTURES, "ratios.csv"),
        kind: "trajectory",
        output: path.join(workDir, "mix-bad.svg"),
      },
      {
        input: path.join(FIXTURES, "ratios.csv"),
        kind: "ratio-histogram",
        output: good,
      },
    ]);
    const result = run([list]);
    expect(result.status).toBe(2);
    expect(result.stdout).toContain("missing columns");
    expect(result.stdout).toContain(`rendered ${good}`);
    expect(fs.existsSync(good)).toBe(true);
    expect(fs.existsSync(path.join(workDir, "mix-bad.svg"))).toBe(false);
  });

  it("exits 1 when the only failures are IO", () => {
    const list = writeJobs("io.json", [
      {
        input: path.join(FIXTURES, "does-not-exist.csv"),
        kind: "trajectory",
        output: path.join(workDir, "io.svg"),
      },
    ]);
    const result = run([list]);
    expect(result.status).toBe(1);
    expect(result.stdout).toContain("(io)");
  });

  it("refuses a non-svg output path as a validation error", () => {
    const list = writeJobs("ext.json", [
      {
        input: path.join(FIXTURES, "trajectory.csv"),
        kind: "trajectory",
        output: path.join(workDir, "chart.png"),
      },
    ]);
    const result = run([list]);
    expect(result.status).toBe(2);
    expect(result.stdout).toContain("must end in .svg");
  });
});

describe("job-list handling", () => {
  it("exits 2 on an invalid job list", () => {
    const list = writeJobs("bad.json", [{ input: "a.csv", kind: "pie", output: "a.svg" }]);
    const result = run([list]);
    expect(result.status).toBe(2);
    expect(result.stderr).toContain("job list is invalid");
  });

  it("exits 1 when the job list cannot be read", () => {
    const result = run([path.join(workDir, "missing.json")]);
    expect(result.status).toBe(1);
    expect(result.stderr).toContain("cannot read job list");
  });

  it("prints usage without a job list", () => {
    const result = run([]);
    expect(result.status).toBe(2);
    expect(result.stderr).toContain("usage:");
  });

  it("exits 0 for --help", () => {
    const result = run(["--help"]);
    expect(result.status).toBe(0);
    expect(result.stderr).toContain("usage:");
  });

  it("exits 0 for an empty job list", () => {
    const list = writeJobs("empty.json", []);
    const result = run([list]);
    expect(result.status).toBe(0);
    expect(result.stderr).toContain("0/0 jobs rendered");
  });
});
