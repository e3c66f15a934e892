/** Minimal 8-bit grayscale PNG encoder (node:zlib for the IDAT stream). */

import { deflateSync } from "node:zlib";

const SIGNATURE = Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]);

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n += 1) {
    let c = n;
    for (let k = 0; k < 8; k += 1) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(data: Uint8Array): number {
  let crc = 0xffffffff;
  for (const byte of data) {
    crc = CRC_TABLE[(crc ^ byte) & 0xff] ^ (crc >>> 8);
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function chunk(type: string, body: Uint8Array): Buffer {
  const header = Buffer.alloc(8);
  header.writeUInt32BE(body.length, 0);
  header.write(type, 4, "ascii");
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(Buffer.concat([header.subarray(4), body])), 0);
  return Buffer.concat([header, body, crc]);
}

/**
 * Encode row-major grayscale pixels as a PNG.
 *
 * Optional `texts` become tEXt chunks (keyword -> Latin-1 text), used to
 * carry captions such as the PSNR of a recovery.
 */
export function encodeGrayPng(
  width: number,
  height: number,
  pixels: Uint8Array,
  texts: Record<string, string> = {}
): Buffer {
  if (!Number.isInteger(width) || !Number.isInteger(height) || width < 1 || height < 1) {
    throw new RangeError(`bad PNG dimensions ${width}x${height}`);
  }
  if (pixels.length !== width * height) {
    throw new RangeError(
      `pixel buffer holds ${pixels.length} bytes, expected ${width * height}`
    );
  }

  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 0; // color type: grayscale
  ihdr[10] = 0; // compression
  ihdr[11] = 0; // filter method
  ihdr[12] = 0; // interlace: none

  // Each scanline is prefixed with filter type 0 (no filtering).
  const raw = Buffer.alloc((width + 1) * height);
  for (let row = 0; row < height; row += 1) {
    raw[row * (width + 1)] = 0;
    raw.set(pixels.subarray(row * width, (row + 1) * width), row * (width + 1) + 1);
  }

  const parts = [SIGNATURE, chunk("IHDR", ihdr)];
  for (const [keyword, text] of Object.entries(texts)) {
    if (keyword.length === 0 || keyword.length > 79) {
      throw new RangeError(`tEXt keyword length must be 1..79: "${keyword}"`);
    }
    parts.push(
      chunk(
        "tEXt",
        Buffer.concat([
          Buffer.from(keyword, "latin1"),
          Buffer.from([0]),
          Buffer.from(text, "latin1"),
        ])
      )
    );
  }
  parts.push(chunk("IDAT", deflateSync(raw)));
  parts.push(chunk("IEND", Buffer.alloc(0)));
  return Buffer.concat(parts);
}
