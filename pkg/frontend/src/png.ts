import { crc32, deflateSync } from "node:zlib";

/** Eight-byte PNG file signature. */
export const PNG_SIGNATURE = Buffer.from([
  0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a,
]);

function chunk(type: string, payload: Buffer): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, "ascii");
  // The chunk CRC covers the type bytes followed by the payload.
  const crc = crc32(payload, crc32(Buffer.from(type, "ascii")));
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc >>> 0, 0);
  return Buffer.concat([head, payload, tail]);
}

/**
 * Encodes an RGBA byte buffer as an 8-bit truecolor-with-alpha PNG.
 *
 * Scanlines use filter type 0 (None) and are compressed with zlib at
 * maximum level, so the encoding is deterministic: the same pixels
 * always produce the same bytes.
 */
export function encodePng(
  width: number,
  height: number,
  rgba: Uint8Array
): Buffer {
  if (rgba.length !== width * height * 4) {
    throw new Error(
      `pixel buffer has ${rgba.length} bytes, ` +
        `expected ${width * height * 4} for ${width}x${height} RGBA`
    );
  }
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // color type: truecolor with alpha
  ihdr[10] = 0; // compression method
  ihdr[11] = 0; // filter method
  ihdr[12] = 0; // interlace: none

  const stride = 1 + width * 4;
  const raw = Buffer.alloc(height * stride);
  for (let y = 0; y < height; y++) {
    raw[y * stride] = 0; // filter type None
    raw.set(rgba.subarray(y * width * 4, (y + 1) * width * 4),
            y * stride + 1);
  }
  const idat = deflateSync(raw, { level: 9 });
  return Buffer.concat([
    PNG_SIGNATURE,
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", Buffer.alloc(0)),
  ]);
}
