#!/usr/bin/env node
/** Command-line figure renderer for pursuit benchmark outputs.
 *
 * Usage:
 *   pursuit-figures --kind rate --in fbp.summary.csv --in omp.summary.csv \
 *                   --out rates.svg
 *   pursuit-figures --kind phase --in run.phase.csv --rho50 run.rho50.json \
 *                   --out phase.svg
 *   pursuit-figures --kind image --in input.pgm --in recon.pgm \
 *                   --report report.csv --out panels.png
 *
 * Exit codes: 0 success; 2 on usage errors, schema mismatches, empty or
 * unreadable inputs (no output file is written in that case).
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { EmptyInputError, SchemaMismatchError, UnsupportedImageError } from "./errors.js";
import { FIGURE_KINDS } from "./figures.js";
import type { FigureKind, FigureSpec } from "./figures.js";
import { writeFigure } from "./render.js";

const USAGE = `usage: pursuit-figures --kind {${FIGURE_KINDS.join("|")}} --in FILE [--in FILE ...] --out FILE
                       [--title T] [--xlabel X] [--ylabel Y]
                       [--rho50 FILE] [--report FILE] [--width N] [--height N]`;

class UsageError extends Error {}

function positiveInt(value: string | undefined, flag: string): number | undefined {
  if (value === undefined) return undefined;
  const parsed = Number(value);
  if (!Number.isInteger(parsed) || parsed <= 0) {
    throw new UsageError(`${flag} must be a positive integer, got ${value}`);
  }
  return parsed;
}

/** Parse argv into a FigureSpec; throws UsageError on bad flags. */
export function parseFigureArgs(argv: string[]): FigureSpec {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string", multiple: true },
        out: { type: "string" },
        title: { type: "string" },
        xlabel: { type: "string" },
        ylabel: { type: "string" },
        rho50: { type: "string" },
        report: { type: "string" },
        width: { type: "string" },
        height: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: false,
    });
  } catch (error) {
    throw new UsageError((error as Error).message);
  }
  const values = parsed.values;
  if (values.help === true) {
    throw new UsageError(USAGE);
  }
  const kind = values.kind;
  if (kind === undefined || !FIGURE_KINDS.includes(kind as FigureKind)) {
    throw new UsageError(
      `--kind must be one of ${FIGURE_KINDS.join(", ")}; got ${kind ?? "nothing"}`
    );
  }
  const inputs = values.in ?? [];
  if (inputs.length === 0) {
    throw new UsageError("at least one --in input file is required");
  }
  if (values.out === undefined) {
    throw new UsageError("--out is required");
  }
  return {
    kind: kind as FigureKind,
    inputs,
    output: values.out,
    title: values.title,
    xLabel: values.xlabel,
    yLabel: values.ylabel,
    rho50Path: values.rho50,
    reportPath: values.report,
    width: positiveInt(values.width, "--width"),
    height: positiveInt(values.height, "--height"),
  };
}

/** Run the CLI; returns the process exit code. */
export function run(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseFigureArgs(argv);
  } catch (error) {
    if (error instanceof UsageError) {
      console.error(`error: ${error.message}`);
      console.error(USAGE);
      return 2;
    }
    throw error;
  }
  try {
    writeFigure(spec);
  } catch (error) {
    if (
      error instanceof SchemaMismatchError ||
      error instanceof EmptyInputError ||
      error instanceof UnsupportedImageError ||
      (error instanceof Error && "code" in error && error.code === "ENOENT")
    ) {
      console.error(`error: ${error.message}`);
      return 2;
    }
    throw error;
  }
  console.log(`wrote ${spec.output}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
