/** Readers for the benchmark CSV/JSON outputs.
 *
 * Every reader validates the header against the documented column list
 * before touching any data and raises SchemaMismatchError naming the first
 * offending column. Numeric cells use the producer's conventions: full
 * `repr` floats, `inf`/`-inf`/`nan` sentinels, empty string for "not
 * applicable", `true`/`false` for booleans. Statistics are never
 * recomputed here — files are read as-is.
 */

import { readFileSync } from "node:fs";

import Papa from "papaparse";

import { EmptyInputError, SchemaMismatchError } from "./errors.js";

export const SUMMARY_COLUMNS = [
  "algorithm",
  "k",
  "snr_db",
  "trials",
  "exact_rate",
  "anmse",
  "mean_runtime_seconds",
  "distortion_db",
] as const;

export const PHASE_COLUMNS = [
  "lambda",
  "rho",
  "m",
  "k",
  "algorithm",
  "successes",
  "trials",
] as const;

export const TRIAL_COLUMNS = [
  "n",
  "m",
  "k",
  "ensemble",
  "snr_db",
  "algorithm",
  "alpha",
  "beta",
  "epsilon",
  "k_max",
  "seed",
  "trial_index",
  "exact",
  "nmse",
  "runtime_seconds",
  "status",
] as const;

export const IMAGE_REPORT_COLUMNS = [
  "input",
  "algorithm",
  "m",
  "seed",
  "blocks",
  "converged_blocks",
  "psnr_db",
] as const;

export const RHO50_SCHEMA = "pursuit-phase-rho50@1";

export interface SummaryRow {
  algorithm: string;
  k: number;
  snrDb: number | null;
  trials: number;
  exactRate: number;
  anmse: number;
  meanRuntimeSeconds: number;
  distortionDb: number;
}

export interface PhaseRow {
  lambda: number;
  rho: number;
  m: number;
  k: number;
  algorithm: string;
  successes: number;
  trials: number;
}

export interface ImageReportRow {
  input: string;
  algorithm: string;
  m: number;
  seed: number;
  blocks: number;
  convergedBlocks: number;
  psnrDb: number;
}

export interface Rho50Fit {
  lambda: number;
  rho50: number;
  intercept: number;
  slope: number;
  converged: boolean;
}

export interface Rho50Document {
  n: number;
  ensemble: string;
  lambdas: number[];
  rhos: number[];
  algorithms: Record<string, (Rho50Fit | null)[]>;
}

type RawRow = Record<string, string>;

function parseCsv(path: string): { fields: string[]; rows: RawRow[] } {
  const text = readFileSync(path, "utf8");
  const result = Papa.parse<RawRow>(text, {
    header: true,
    skipEmptyLines: "greedy",
  });
  const fatal = result.errors.find((e) => e.message);
  if (fatal !== undefined && result.data.length === 0) {
    throw new EmptyInputError(`${path}: not parseable as CSV (${fatal.message})`);
  }
  return { fields: result.meta.fields ?? [], rows: result.data };
}

/** Validate a header against an expected column list (order-insensitive). */
export function checkColumns(
  actual: readonly string[],
  expected: readonly string[],
  path: string
): void {
  for (const column of expected) {
    if (!actual.includes(column)) {
      throw new SchemaMismatchError(
        column,
        `${path}: missing column "${column}" ` +
          `(expected columns: ${expected.join(", ")})`
      );
    }
  }
  for (const column of actual) {
    if (!expected.includes(column)) {
      throw new SchemaMismatchError(
        column,
        `${path}: unexpected column "${column}" ` +
          `(expected columns: ${expected.join(", ")})`
      );
    }
  }
}

function numericCell(
  value: string | undefined,
  column: string,
  path: string
): number | null {
  if (value === undefined || value === "") {
    return null;
  }
  if (value === "inf") return Infinity;
  if (value === "-inf") return -Infinity;
  if (value === "nan") return NaN;
  const parsed = Number(value);
  if (Number.isNaN(parsed)) {
    throw new SchemaMismatchError(
      column,
      `${path}: column "${column}" holds non-numeric value ${JSON.stringify(value)}`
    );
  }
  return parsed;
}

function requiredNumericCell(
  value: string | undefined,
  column: string,
  path: string
): number {
  const parsed = numericCell(value, column, path);
  if (parsed === null) {
    throw new SchemaMismatchError(
      column,
      `${path}: column "${column}" holds an empty value where a number is required`
    );
  }
  return parsed;
}

function requiredTextCell(
  value: string | undefined,
  column: string,
  path: string
): string {
  if (value === undefined || value === "") {
    throw new SchemaMismatchError(column, `${path}: column "${column}" is empty`);
  }
  return value;
}

function requireRows<T>(rows: T[], path: string): T[] {
  if (rows.length === 0) {
    throw new EmptyInputError(`${path}: no data rows`);
  }
  return rows;
}

/** Read one sweep-summary CSV (one row per (k, snr) grid point). */
export function readSummaryCsv(path: string): SummaryRow[] {
  const { fields, rows } = parseCsv(path);
  checkColumns(fields, SUMMARY_COLUMNS, path);
  return requireRows(
    rows.map((row) => ({
      algorithm: requiredTextCell(row.algorithm, "algorithm", path),
      k: requiredNumericCell(row.k, "k", path),
      snrDb: numericCell(row.snr_db, "snr_db", path),
      trials: requiredNumericCell(row.trials, "trials", path),
      exactRate: requiredNumericCell(row.exact_rate, "exact_rate", path),
      anmse: requiredNumericCell(row.anmse, "anmse", path),
      meanRuntimeSeconds: requiredNumericCell(
        row.mean_runtime_seconds,
        "mean_runtime_seconds",
        path
      ),
      distortionDb: requiredNumericCell(row.distortion_db, "distortion_db", path),
    })),
    path
  );
}

/** Read one phase-transition CSV (one row per present grid cell). */
export function readPhaseCsv(path: string): PhaseRow[] {
  const { fields, rows } = parseCsv(path);
  checkColumns(fields, PHASE_COLUMNS, path);
  return requireRows(
    rows.map((row) => ({
      lambda: requiredNumericCell(row.lambda, "lambda", path),
      rho: requiredNumericCell(row.rho, "rho", path),
      m: requiredNumericCell(row.m, "m", path),
      k: requiredNumericCell(row.k, "k", path),
      algorithm: requiredTextCell(row.algorithm, "algorithm", path),
      successes: requiredNumericCell(row.successes, "successes", path),
      trials: requiredNumericCell(row.trials, "trials", path),
    })),
    path
  );
}

/** Read one image-recovery report CSV. */
export function readImageReportCsv(path: string): ImageReportRow[] {
  const { fields, rows } = parseCsv(path);
  checkColumns(fields, IMAGE_REPORT_COLUMNS, path);
  return requireRows(
    rows.map((row) => ({
      input: requiredTextCell(row.input, "input", path),
      algorithm: requiredTextCell(row.algorithm, "algorithm", path),
      m: requiredNumericCell(row.m, "m", path),
      seed: requiredNumericCell(row.seed, "seed", path),
      blocks: requiredNumericCell(row.blocks, "blocks", path),
      convergedBlocks: requiredNumericCell(
        row.converged_blocks,
        "converged_blocks",
        path
      ),
      psnrDb: requiredNumericCell(row.psnr_db, "psnr_db", path),
    })),
    path
  );
}

function jsonNumber(value: unknown, field: string, path: string): number {
  if (typeof value === "number") return value;
  if (value === "inf") return Infinity;
  if (value === "-inf") return -Infinity;
  if (value === "nan") return NaN;
  throw new SchemaMismatchError(
    field,
    `${path}: field "${field}" holds ${JSON.stringify(value)} instead of a number`
  );
}

/** Read and validate a rho50 JSON document. */
export function readRho50Json(path: string): Rho50Document {
  const doc = JSON.parse(readFileSync(path, "utf8")) as Record<string, unknown>;
  if (doc.schema !== RHO50_SCHEMA) {
    throw new SchemaMismatchError(
      "schema",
      `${path}: field "schema" is ${JSON.stringify(doc.schema)}, ` +
        `expected "${RHO50_SCHEMA}"`
    );
  }
  for (const field of ["n", "ensemble", "lambdas", "rhos", "algorithms"]) {
    if (!(field in doc)) {
      throw new SchemaMismatchError(field, `${path}: missing field "${field}"`);
    }
  }
  const algorithms: Record<string, (Rho50Fit | null)[]> = {};
  const rawAlgorithms = doc.algorithms as Record<string, unknown>;
  for (const [label, fits] of Object.entries(rawAlgorithms)) {
    if (!Array.isArray(fits)) {
      throw new SchemaMismatchError(
        "algorithms",
        `${path}: algorithms["${label}"] is not an array of fits`
      );
    }
    algorithms[label] = fits.map((fit, index) => {
      if (fit === null) return null;
      const entry = fit as Record<string, unknown>;
      for (const field of ["lambda", "rho50", "intercept", "slope", "converged"]) {
        if (!(field in entry)) {
          throw new SchemaMismatchError(
            field,
            `${path}: algorithms["${label}"][${index}] misses field "${field}"`
          );
        }
      }
      return {
        lambda: jsonNumber(entry.lambda, "lambda", path),
        rho50: jsonNumber(entry.rho50, "rho50", path),
        intercept: jsonNumber(entry.intercept, "intercept", path),
        slope: jsonNumber(entry.slope, "slope", path),
        converged: Boolean(entry.converged),
      };
    });
  }
  return {
    n: jsonNumber(doc.n, "n", path),
    ensemble: String(doc.ensemble),
    lambdas: (doc.lambdas as unknown[]).map((v, i) =>
      jsonNumber(v, `lambdas[${i}]`, path)
    ),
    rhos: (doc.rhos as unknown[]).map((v, i) => jsonNumber(v, `rhos[${i}]`, path)),
    algorithms,
  };
}
