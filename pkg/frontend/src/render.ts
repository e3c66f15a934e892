/** Render a FigureSpec to SVG (charts) or PNG (image montages). */

import { writeFileSync } from "node:fs";

import * as echarts from "echarts";

import { curveOption, phaseOption, montage } from "./figures.js";
import type { FigureSpec } from "./figures.js";
import { readPgm } from "./pgm.js";
import { encodeGrayPng } from "./png.js";
import {
  readImageReportCsv,
  readPhaseCsv,
  readRho50Json,
  readSummaryCsv,
} from "./schema.js";

/** Server-side render an echarts option to an SVG string. */
export function renderChartSvg(
  option: echarts.EChartsOption,
  width = 860,
  height = 560
): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

/**
 * Produce the figure bytes for a spec without touching the file system
 * output; any validation or rendering failure therefore leaves no file.
 */
export function renderFigure(spec: FigureSpec): string | Buffer {
  switch (spec.kind) {
    case "rate":
    case "anmse":
    case "runtime":
    case "noisy": {
      const rows = spec.inputs.flatMap((path) => readSummaryCsv(path));
      const height = spec.height ?? 560;
      return renderChartSvg(
        curveOption(spec.kind, rows, spec),
        spec.width ?? 860,
        height
      );
    }
    case "phase": {
      const rows = spec.inputs.flatMap((path) => readPhaseCsv(path));
      const rho50 = spec.rho50Path !== undefined ? readRho50Json(spec.rho50Path) : null;
      const algorithms = new Set(rows.map((row) => row.algorithm)).size;
      return renderChartSvg(
        phaseOption(rows, rho50, spec),
        spec.width ?? 860,
        spec.height ?? Math.max(420, 360 * algorithms)
      );
    }
    case "image": {
      const panels = spec.inputs.map((path) => readPgm(path));
      const combined = montage(panels);
      const texts: Record<string, string> = {
        Description: spec.title ?? "sparse image recovery panels",
      };
      if (spec.reportPath !== undefined) {
        const report = readImageReportCsv(spec.reportPath);
        texts.Comment = report
          .map(
            (row) =>
              `${row.algorithm} m=${row.m} seed=${row.seed} ` +
              `psnr_db=${row.psnrDb} converged=${row.convergedBlocks}/${row.blocks}`
          )
          .join("; ");
      }
      return encodeGrayPng(combined.width, combined.height, combined.pixels, texts);
    }
  }
}

/** Render a spec and write the output file (only after a successful render). */
export function writeFigure(spec: FigureSpec): void {
  const data = renderFigure(spec);
  writeFileSync(spec.output, data);
}
