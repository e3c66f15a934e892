/** Binary PGM (P5, maxval 255) reader, mirroring the producer's writer. */

import { readFileSync } from "node:fs";

import { UnsupportedImageError } from "./errors.js";

export interface Pgm {
  width: number;
  height: number;
  /** Row-major pixel bytes, length width * height. */
  pixels: Uint8Array;
}

const WHITESPACE = new Set([0x20, 0x09, 0x0a, 0x0d, 0x0b, 0x0c]);

/** Parse a P5 PGM with maxval 255; `#` comments in the header are allowed. */
export function parsePgm(data: Uint8Array, source = "<buffer>"): Pgm {
  let offset = 0;

  function nextToken(): string {
    // Skip whitespace and comments that run to end of line.
    for (;;) {
      while (offset < data.length && WHITESPACE.has(data[offset])) offset += 1;
      if (offset < data.length && data[offset] === 0x23 /* '#' */) {
        while (offset < data.length && data[offset] !== 0x0a) offset += 1;
        continue;
      }
      break;
    }
    const start = offset;
    while (offset < data.length && !WHITESPACE.has(data[offset])) offset += 1;
    if (start === offset) {
      throw new UnsupportedImageError(`${source}: truncated PGM header`);
    }
    return new TextDecoder("ascii").decode(data.subarray(start, offset));
  }

  const magic = nextToken();
  if (magic !== "P5") {
    throw new UnsupportedImageError(
      `${source}: expected binary PGM magic "P5", found "${magic}"`
    );
  }
  const width = Number(nextToken());
  const height = Number(nextToken());
  const maxval = Number(nextToken());
  if (!Number.isInteger(width) || !Number.isInteger(height) || width < 1 || height < 1) {
    throw new UnsupportedImageError(`${source}: bad PGM dimensions`);
  }
  if (maxval !== 255) {
    throw new UnsupportedImageError(
      `${source}: only maxval 255 is supported, found ${maxval}`
    );
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (offset >= data.length || !WHITESPACE.has(data[offset])) {
    throw new UnsupportedImageError(`${source}: malformed PGM header`);
  }
  offset += 1;
  const raster = data.subarray(offset);
  if (raster.length !== width * height) {
    throw new UnsupportedImageError(
      `${source}: raster holds ${raster.length} bytes, expected ${width * height}`
    );
  }
  return { width, height, pixels: new Uint8Array(raster) };
}

/** Read and parse a PGM file. */
export function readPgm(path: string): Pgm {
  return parsePgm(readFileSync(path), path);
}
