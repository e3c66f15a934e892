import { readFileSync } from "node:fs";

import { describe, expect, it } from "vitest";

import {
  EmptyInputError,
  SchemaMismatchError,
  TRIAL_COLUMNS,
  checkColumns,
  readImageReportCsv,
  readPhaseCsv,
  readRho50Json,
  readSummaryCsv,
} from "../src/index.js";
import { fixture, makeTempDir, tamperedCopy } from "./helpers.js";

describe("summary CSV reader", () => {
  it("reads the noiseless sweep fixture", () => {
    const rows = readSummaryCsv(fixture("fbp.summary.csv"));
    expect(rows).toHaveLength(4);
    expect(rows.map((r) => r.k)).toEqual([2, 4, 6, 8]);
    for (const row of rows) {
      expect(row.algorithm).toBe("fbp");
      expect(row.snrDb).toBeNull();
      expect(row.trials).toBe(6);
      expect(row.exactRate).toBeGreaterThanOrEqual(0);
      expect(row.exactRate).toBeLessThanOrEqual(1);
      expect(row.meanRuntimeSeconds).toBeGreaterThan(0);
    }
  });

  it("reads SNR-sweep rows with their noise levels", () => {
    const rows = readSummaryCsv(fixture("noisy.summary.csv"));
    expect(rows.map((r) => r.snrDb)).toEqual([10, 20, 30]);
    for (const row of rows) {
      expect(Number.isFinite(row.distortionDb)).toBe(true);
    }
  });

  it("names a missing column", () => {
    const dir = makeTempDir();
    const path = tamperedCopy(fixture("fbp.summary.csv"), dir, "broken.csv", (text) =>
      text.replace("exact_rate", "exactness")
    );
    let error: unknown;
    try {
      readSummaryCsv(path);
    } catch (caught) {
      error = caught;
    }
    expect(error).toBeInstanceOf(SchemaMismatchError);
    expect((error as SchemaMismatchError).column).toBe("exact_rate");
    expect((error as SchemaMismatchError).message).toContain("exact_rate");
  });

  it("names an unexpected column", () => {
    const dir = makeTempDir();
    const path = tamperedCopy(fixture("fbp.summary.csv"), dir, "extra.csv", (text) => {
      const lines = text.split("\n");
      lines[0] = `${lines[0]},surprise`;
      return lines.join("\n");
    });
    expect(() => readSummaryCsv(path)).toThrowError(SchemaMismatchError);
    try {
      readSummaryCsv(path);
    } catch (error) {
      expect((error as SchemaMismatchError).column).toBe("surprise");
    }
  });

  it("rejects a header-only file as empty", () => {
    const dir = makeTempDir();
    const path = tamperedCopy(fixture("fbp.summary.csv"), dir, "empty.csv", (text) =>
      text.split("\n")[0].concat("\n")
    );
    expect(() => readSummaryCsv(path)).toThrowError(EmptyInputError);
  });

  it("names the column holding a malformed number", () => {
    const dir = makeTempDir();
    const path = tamperedCopy(fixture("fbp.summary.csv"), dir, "garbled.csv", (text) => {
      const lines = text.split("\n");
      const cells = lines[1].split(",");
      cells[4] = "not-a-number";
      lines[1] = cells.join(",");
      return lines.join("\n");
    });
    try {
      readSummaryCsv(path);
      expect.unreachable("should have thrown");
    } catch (error) {
      expect(error).toBeInstanceOf(SchemaMismatchError);
      expect((error as SchemaMismatchError).column).toBe("exact_rate");
    }
  });
});

describe("phase CSV reader", () => {
  it("reads every present cell of the fixture grid", () => {
    const rows = readPhaseCsv(fixture("phase.phase.csv"));
    // 2 lambdas x 4 rhos x 2 algorithms, all cells feasible.
    expect(rows).toHaveLength(16);
    const algorithms = new Set(rows.map((r) => r.algorithm));
    expect([...algorithms].sort()).toEqual(["fbp", "omp"]);
    for (const row of rows) {
      expect(row.successes).toBeGreaterThanOrEqual(0);
      expect(row.successes).toBeLessThanOrEqual(row.trials);
      expect(row.k).toBeLessThanOrEqual(row.m);
    }
  });

  it("rejects a summary CSV with a named diagnostic", () => {
    try {
      readPhaseCsv(fixture("fbp.summary.csv"));
      expect.unreachable("should have thrown");
    } catch (error) {
      expect(error).toBeInstanceOf(SchemaMismatchError);
      expect((error as SchemaMismatchError).column).toBe("lambda");
    }
  });
});

describe("rho50 JSON reader", () => {
  it("reads fits per algorithm and lambda", () => {
    const doc = readRho50Json(fixture("phase.rho50.json"));
    expect(doc.lambdas).toEqual([0.25, 0.5]);
    expect(Object.keys(doc.algorithms).sort()).toEqual(["fbp", "omp"]);
    for (const fits of Object.values(doc.algorithms)) {
      expect(fits).toHaveLength(2);
      for (const fit of fits) {
        if (fit !== null) {
          expect(doc.lambdas).toContain(fit.lambda);
          expect(Number.isFinite(fit.rho50)).toBe(true);
        }
      }
    }
  });

  it("rejects a document with the wrong schema tag", () => {
    const dir = makeTempDir();
    const path = tamperedCopy(fixture("phase.rho50.json"), dir, "wrong.json", (text) =>
      text.replace("pursuit-phase-rho50@1", "pursuit-phase-rho50@2")
    );
    try {
      readRho50Json(path);
      expect.unreachable("should have thrown");
    } catch (error) {
      expect(error).toBeInstanceOf(SchemaMismatchError);
      expect((error as SchemaMismatchError).column).toBe("schema");
    }
  });
});

describe("image report reader", () => {
  it("reads the recovery report fixture", () => {
    const rows = readImageReportCsv(fixture("report.csv"));
    expect(rows).toHaveLength(1);
    expect(rows[0].blocks).toBe(4);
    expect(rows[0].convergedBlocks).toBeLessThanOrEqual(rows[0].blocks);
    expect(rows[0].psnrDb).toBeGreaterThan(0);
  });
});

describe("column checking", () => {
  it("accepts the trial-records header", () => {
    const header = readFileSync(fixture("fbp.records.csv"), "utf8")
      .split("\n")[0]
      .split(",");
    expect(() => checkColumns(header, TRIAL_COLUMNS, "records")).not.toThrow();
  });

  it("is order-insensitive for equal column sets", () => {
    expect(() => checkColumns(["b", "a"], ["a", "b"], "x")).not.toThrow();
  });
});
