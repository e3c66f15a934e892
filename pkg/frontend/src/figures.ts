/** Chart-option builders for each figure kind.
 *
 * Builders turn already-validated rows into echarts option objects (or, for
 * the image kind, a pixel montage). They plot file contents verbatim and
 * never recompute statistics.
 */

import type { EChartsOption, SeriesOption } from "echarts";

import { EmptyInputError, SchemaMismatchError, UnsupportedImageError } from "./errors.js";
import type { Pgm } from "./pgm.js";
import type { PhaseRow, Rho50Document, SummaryRow } from "./schema.js";

export type FigureKind = "rate" | "anmse" | "runtime" | "phase" | "noisy" | "image";

export const FIGURE_KINDS: readonly FigureKind[] = [
  "rate",
  "anmse",
  "runtime",
  "phase",
  "noisy",
  "image",
];

/** One render request: inputs, kind, output path and label overrides. */
export interface FigureSpec {
  kind: FigureKind;
  /** CSV paths (summary or phase) or PGM paths for the image kind. */
  inputs: string[];
  output: string;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  /** Optional rho50 JSON whose fits are overlaid on phase heat maps. */
  rho50Path?: string;
  /** Optional image-report CSV whose PSNR captions image montages. */
  reportPath?: string;
  width?: number;
  height?: number;
}

interface CurveFigure {
  x: (row: SummaryRow) => number | null;
  y: (row: SummaryRow) => number;
  title: string;
  xLabel: string;
  yLabel: string;
  yLog?: boolean;
  yMin?: number;
  yMax?: number;
}

const CURVE_FIGURES: Record<Exclude<FigureKind, "phase" | "image">, CurveFigure> = {
  rate: {
    x: (row) => row.k,
    y: (row) => row.exactRate,
    title: "Exact recovery rate",
    xLabel: "sparsity k",
    yLabel: "exact recovery rate",
    yMin: 0,
    yMax: 1,
  },
  anmse: {
    x: (row) => row.k,
    y: (row) => row.anmse,
    title: "Average normalized MSE",
    xLabel: "sparsity k",
    yLabel: "ANMSE",
    yLog: true,
  },
  runtime: {
    x: (row) => row.k,
    y: (row) => row.meanRuntimeSeconds,
    title: "Mean recovery runtime",
    xLabel: "sparsity k",
    yLabel: "runtime (s)",
    yLog: true,
  },
  noisy: {
    x: (row) => row.snrDb,
    y: (row) => row.distortionDb,
    title: "Distortion vs. SNR",
    xLabel: "SNR (dB)",
    yLabel: "distortion (dB)",
  },
};

function groupByAlgorithm(rows: SummaryRow[]): Map<string, SummaryRow[]> {
  const groups = new Map<string, SummaryRow[]>();
  for (const row of rows) {
    const bucket = groups.get(row.algorithm);
    if (bucket === undefined) {
      groups.set(row.algorithm, [row]);
    } else {
      bucket.push(row);
    }
  }
  return groups;
}

/** Line chart of one summary statistic per algorithm. */
export function curveOption(
  kind: Exclude<FigureKind, "phase" | "image">,
  rows: SummaryRow[],
  spec: Pick<FigureSpec, "title" | "xLabel" | "yLabel">
): EChartsOption {
  const figure = CURVE_FIGURES[kind];
  const series: SeriesOption[] = [];
  for (const [algorithm, group] of groupByAlgorithm(rows)) {
    const points: [number, number][] = [];
    for (const row of group) {
      const x = figure.x(row);
      if (x === null) {
        throw new SchemaMismatchError(
          "snr_db",
          `the ${kind} figure needs a value in column "snr_db" on every row`
        );
      }
      const y = figure.y(row);
      // Log axes cannot place zero or non-finite values; linear axes skip
      // non-finite ones. Dropped points simply leave a gap in the curve.
      if (!Number.isFinite(y) || (figure.yLog === true && y <= 0)) {
        continue;
      }
      points.push([x, y]);
    }
    points.sort((a, b) => a[0] - b[0]);
    series.push({
      name: algorithm,
      type: "line",
      symbolSize: 7,
      data: points,
    });
  }
  if (series.every((s) => (s.data as unknown[]).length === 0)) {
    throw new EmptyInputError(`no plottable ${kind} points after filtering`);
  }
  return {
    animation: false,
    backgroundColor: "#ffffff",
    title: { text: spec.title ?? figure.title, left: "center" },
    legend: { bottom: 0 },
    grid: { left: 70, right: 30, top: 50, bottom: 60 },
    xAxis: {
      type: "value",
      name: spec.xLabel ?? figure.xLabel,
      nameLocation: "middle",
      nameGap: 28,
      scale: true,
    },
    yAxis: {
      type: figure.yLog === true ? "log" : "value",
      name: spec.yLabel ?? figure.yLabel,
      nameLocation: "middle",
      nameGap: 45,
      min: figure.yMin,
      max: figure.yMax,
    },
    series,
  };
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function centerAlignedRange(grid: number[]): { min: number; max: number } {
  // A hidden value axis with this range puts coordinate grid[i] exactly at
  // the center of category cell i, provided the grid is uniform (which the
  // producer's default grids are).
  if (grid.length === 1) {
    return { min: grid[0] - 0.5, max: grid[0] + 0.5 };
  }
  const step = (grid[grid.length - 1] - grid[0]) / (grid.length - 1);
  return { min: grid[0] - step / 2, max: grid[grid.length - 1] + step / 2 };
}

/** Stacked per-algorithm success-rate heat maps, optionally with rho50 overlays. */
export function phaseOption(
  rows: PhaseRow[],
  rho50: Rho50Document | null,
  spec: Pick<FigureSpec, "title" | "xLabel" | "yLabel">
): EChartsOption {
  const algorithms = [...new Set(rows.map((row) => row.algorithm))];
  const lambdas = uniqueSorted(rows.map((row) => row.lambda));
  const rhos = uniqueSorted(rows.map((row) => row.rho));
  const lambdaRange = centerAlignedRange(lambdas);
  const rhoRange = centerAlignedRange(rhos);

  const grids: NonNullable<unknown>[] = [];
  const xAxes: NonNullable<unknown>[] = [];
  const yAxes: NonNullable<unknown>[] = [];
  const series: SeriesOption[] = [];
  const titles: NonNullable<unknown>[] = [
    ...(spec.title !== undefined ? [{ text: spec.title, left: "center" }] : []),
  ];
  const heatmapSeriesIndices: number[] = [];

  const topPad = spec.title !== undefined ? 8 : 4;
  const bandHeight = (100 - topPad - 6) / algorithms.length;

  algorithms.forEach((algorithm, index) => {
    const top = topPad + index * bandHeight;
    grids.push({
      left: 80,
      right: 110,
      top: `${top + 6}%`,
      height: `${bandHeight - 10}%`,
    });
    titles.push({
      text: algorithm,
      textStyle: { fontSize: 13 },
      left: 80,
      top: `${top}%`,
    });
    xAxes.push({
      type: "category",
      gridIndex: index,
      data: lambdas.map(String),
      name: spec.xLabel ?? "lambda = m / n",
      nameLocation: "middle",
      nameGap: 26,
    });
    yAxes.push({
      type: "category",
      gridIndex: index,
      data: rhos.map(String),
      name: spec.yLabel ?? "rho = k / m",
      nameLocation: "middle",
      nameGap: 40,
    });
    heatmapSeriesIndices.push(series.length);
    series.push({
      name: algorithm,
      type: "heatmap",
      xAxisIndex: 2 * index,
      yAxisIndex: 2 * index,
      label: { show: true, formatter: (p) => (p.value as number[])[2].toFixed(2) },
      data: rows
        .filter((row) => row.algorithm === algorithm)
        .map((row) => [
          lambdas.indexOf(row.lambda),
          rhos.indexOf(row.rho),
          Number((row.successes / row.trials).toFixed(3)),
        ]),
    });
    // Hidden value axes share the grid so rho50 fits can be drawn in data
    // coordinates on top of the category heat map.
    xAxes.push({
      type: "value",
      gridIndex: index,
      min: lambdaRange.min,
      max: lambdaRange.max,
      show: false,
    });
    yAxes.push({
      type: "value",
      gridIndex: index,
      min: rhoRange.min,
      max: rhoRange.max,
      show: false,
    });
    const fits = rho50?.algorithms[algorithm];
    if (fits !== undefined) {
      const overlay = fits
        .filter((fit): fit is NonNullable<typeof fit> => fit !== null)
        .map((fit) => [fit.lambda, fit.rho50] as [number, number])
        .filter(([, value]) => Number.isFinite(value))
        .sort((a, b) => a[0] - b[0]);
      if (overlay.length > 0) {
        series.push({
          name: `${algorithm} rho50`,
          type: "line",
          xAxisIndex: 2 * index + 1,
          yAxisIndex: 2 * index + 1,
          symbol: "diamond",
          symbolSize: 10,
          lineStyle: { width: 2, type: "dashed" },
          data: overlay,
        });
      }
    }
  });

  return {
    animation: false,
    backgroundColor: "#ffffff",
    title: titles,
    grid: grids,
    xAxis: xAxes,
    yAxis: yAxes,
    visualMap: {
      min: 0,
      max: 1,
      seriesIndex: heatmapSeriesIndices,
      calculable: false,
      orient: "vertical",
      right: 10,
      top: "center",
      text: ["all exact", "none exact"],
    },
    series,
  } as EChartsOption;
}

/** Place equal-height images side by side with a white gap between panels. */
export function montage(panels: Pgm[], gap = 4): Pgm {
  if (panels.length === 0) {
    throw new EmptyInputError("an image figure needs at least one PGM input");
  }
  const height = panels[0].height;
  for (const panel of panels) {
    if (panel.height !== height) {
      throw new UnsupportedImageError(
        `image panels must share a height; found ${panel.height} and ${height}`
      );
    }
  }
  const width =
    panels.reduce((sum, panel) => sum + panel.width, 0) + gap * (panels.length - 1);
  const pixels = new Uint8Array(width * height).fill(255);
  let xOffset = 0;
  for (const panel of panels) {
    for (let row = 0; row < height; row += 1) {
      pixels.set(
        panel.pixels.subarray(row * panel.width, (row + 1) * panel.width),
        row * width + xOffset
      );
    }
    xOffset += panel.width + gap;
  }
  return { width, height, pixels };
}
