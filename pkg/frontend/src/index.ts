export {
  EmptyInputError,
  SchemaMismatchError,
  UnsupportedImageError,
} from "./errors.js";
export {
  FIGURE_KINDS,
  curveOption,
  montage,
  phaseOption,
} from "./figures.js";
export type { FigureKind, FigureSpec } from "./figures.js";
export { parsePgm, readPgm } from "./pgm.js";
export type { Pgm } from "./pgm.js";
export { encodeGrayPng } from "./png.js";
export { renderChartSvg, renderFigure, writeFigure } from "./render.js";
export {
  IMAGE_REPORT_COLUMNS,
  PHASE_COLUMNS,
  RHO50_SCHEMA,
  SUMMARY_COLUMNS,
  TRIAL_COLUMNS,
  checkColumns,
  readImageReportCsv,
  readPhaseCsv,
  readRho50Json,
  readSummaryCsv,
} from "./schema.js";
export type {
  ImageReportRow,
  PhaseRow,
  Rho50Document,
  Rho50Fit,
  SummaryRow,
} from "./schema.js";
export { parseFigureArgs, run } from "./cli.js";
