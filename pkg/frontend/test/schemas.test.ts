import { describe, expect, it } from "vitest";
import {
  coeffColumns,
  decayColumns,
  probeColumns,
  ratioColumns,
  SchemaError,
  trajectoryColumns,
  validateHeader,
} from "../src/schemas.js";

describe("column layouts", () => {
  it("match the producer contract", () => {
    expect(coeffColumns(2)).toEqual(["N", "R", "r", "M", "j", "n1", "n2", "re", "im"]);
    expect(decayColumns()).toEqual(["N", "lambda", "eta_norm", "l", "weighted_abs"]);
    expect(trajectoryColumns(3)).toEqual([
      "trial",
      "lambda",
      "x1",
      "x2",
      "x3",
      "re",
      "im",
      "abs",
    ]);
    expect(probeColumns(1)).toEqual([
      "N",
      "s",
      "alpha",
      "lambda",
      "x1",
      "re",
      "im",
      "abs",
      "envelope",
    ]);
    expect(ratioColumns()).toEqual(["N", "band", "trial", "ratio"]);
  });
});

describe("validateHeader", () => {
  it("accepts each documented layout and infers the axis count", () => {
    expect(validateHeader("trajectory", trajectoryColumns(2))).toEqual({
      layout: "trajectory",
      n: 2,
    });
    expect(validateHeader("threshold-envelope", probeColumns(3))).toEqual({
      layout: "threshold-probes",
      n: 3,
    });
    expect(validateHeader("ratio-histogram", ratioColumns()).layout).toBe("ratios");
    expect(validateHeader("decay-envelope", coeffColumns(2))).toEqual({
      layout: "kernel-coefficients",
      n: 2,
    });
    expect(validateHeader("decay-envelope", decayColumns()).layout).toBe("decay-scan");
  });

  it("refuses a header from a different artifact and lists missing columns", () => {
    let caught: SchemaError | undefined;
    try {
      validateHeader("trajectory", ratioColumns());
    } catch (error) {
      caught = error as SchemaError;
    }
    expect(caught).toBeInstanceOf(SchemaError);
    expect(caught!.missing).toEqual(["lambda", "x1", "re", "im", "abs"]);
    expect(caught!.message).toContain("missing columns: lambda, x1, re, im, abs");
    expect(caught!.message).toContain("trajectory chart kind");
  });

  it("refuses reordered or extended headers as not matching", () => {
    expect(() =>
      validateHeader("ratio-histogram", ["band", "N", "trial", "ratio"]),
    ).toThrow(/columns out of order or extra/);
    expect(() =>
      validateHeader("trajectory", [...trajectoryColumns(2), "extra"]),
    ).toThrow(SchemaError);
  });

  it("reports both accepted layouts for decay-envelope", () => {
    let caught: SchemaError | undefined;
    try {
      validateHeader("decay-envelope", ["a", "b"]);
    } catch (error) {
      caught = error as SchemaError;
    }
    expect(caught!.message).toContain("kernel-coefficients");
    expect(caught!.message).toContain("decay-scan");
    expect(caught!.missing).toContain("weighted_abs");
    expect(caught!.missing).toContain("re");
  });
});
