/**
 * Minimal RGBA raster canvas with an embedded 5x7 bitmap font, enough
 * to rasterize locus figures without any native or third-party
 * graphics dependency.
 */

export type Color = readonly [number, number, number];

/** Parses "#rrggbb" into an RGB triple. */
export function parseColor(hex: string): Color {
  const match = /^#([0-9a-fA-F]{6})$/.exec(hex);
  if (!match) {
    throw new Error(`color '${hex}' is not of the form #rrggbb`);
  }
  const value = parseInt(match[1], 16);
  return [(value >> 16) & 0xff, (value >> 8) & 0xff, value & 0xff];
}

// --------------------------------------------------------------------------
// 5x7 bitmap font ('1' marks a set pixel; one string per row)
// --------------------------------------------------------------------------

export const GLYPH_WIDTH = 5;
export const GLYPH_HEIGHT = 7;
/** Horizontal advance between character origins, in glyph pixels. */
export const GLYPH_ADVANCE = 6;

export const FONT_5X7: Record<string, readonly string[]> = {
  " ": ["00000", "00000", "00000", "00000", "00000", "00000", "00000"],
  "-": ["00000", "00000", "00000", "11111", "00000", "00000", "00000"],
  "+": ["00000", "00100", "00100", "11111", "00100", "00100", "00000"],
  ".": ["00000", "00000", "00000", "00000", "00000", "01100", "01100"],
  ",": ["00000", "00000", "00000", "00000", "01100", "00100", "01000"],
  "(": ["00010", "00100", "01000", "01000", "01000", "00100", "00010"],
  ")": ["01000", "00100", "00010", "00010", "00010", "00100", "01000"],
  "/": ["00001", "00001", "00010", "00100", "01000", "10000", "10000"],
  "^": ["00100", "01010", "10001", "00000", "00000", "00000", "00000"],
  "=": ["00000", "00000", "11111", "00000", "11111", "00000", "00000"],
  ":": ["00000", "01100", "01100", "00000", "01100", "01100", "00000"],
  _: ["00000", "00000", "00000", "00000", "00000", "00000", "11111"],
  "%": ["11001", "11010", "00010", "00100", "01000", "01011", "10011"],
  "0": ["01110", "10001", "10011", "10101", "11001", "10001", "01110"],
  "1": ["00100", "01100", "00100", "00100", "00100", "00100", "01110"],
  "2": ["01110", "10001", "00001", "00010", "00100", "01000", "11111"],
  "3": ["11111", "00010", "00100", "00010", "00001", "10001", "01110"],
  "4": ["00010", "00110", "01010", "10010", "11111", "00010", "00010"],
  "5": ["11111", "10000", "11110", "00001", "00001", "10001", "01110"],
  "6": ["00110", "01000", "10000", "11110", "10001", "10001", "01110"],
  "7": ["11111", "00001", "00010", "00100", "01000", "01000", "01000"],
  "8": ["01110", "10001", "10001", "01110", "10001", "10001", "01110"],
  "9": ["01110", "10001", "10001", "01111", "00001", "00010", "01100"],
  A: ["01110", "10001", "10001", "11111", "10001", "10001", "10001"],
  B: ["11110", "10001", "10001", "11110", "10001", "10001", "11110"],
  C: ["01110", "10001", "10000", "10000", "10000", "10001", "01110"],
  D: ["11100", "10010", "10001", "10001", "10001", "10010", "11100"],
  E: ["11111", "10000", "10000", "11110", "10000", "10000", "11111"],
  F: ["11111", "10000", "10000", "11110", "10000", "10000", "10000"],
  G: ["01110", "10001", "10000", "10111", "10001", "10001", "01111"],
  H: ["10001", "10001", "10001", "11111", "10001", "10001", "10001"],
  I: ["01110", "00100", "00100", "00100", "00100", "00100", "01110"],
  J: ["00111", "00010", "00010", "00010", "00010", "10010", "01100"],
  K: ["10001", "10010", "10100", "11000", "10100", "10010", "10001"],
  L: ["10000", "10000", "10000", "10000", "10000", "10000", "11111"],
  M: ["10001", "11011", "10101", "10101", "10001", "10001", "10001"],
  N: ["10001", "10001", "11001", "10101", "10011", "10001", "10001"],
  O: ["01110", "10001", "10001", "10001", "10001", "10001", "01110"],
  P: ["11110", "10001", "10001", "11110", "10000", "10000", "10000"],
  Q: ["01110", "10001", "10001", "10001", "10101", "10010", "01101"],
  R: ["11110", "10001", "10001", "11110", "10100", "10010", "10001"],
  S: ["01111", "10000", "10000", "01110", "00001", "00001", "11110"],
  T: ["11111", "00100", "00100", "00100", "00100", "00100", "00100"],
  U: ["10001", "10001", "10001", "10001", "10001", "10001", "01110"],
  V: ["10001", "10001", "10001", "10001", "10001", "01010", "00100"],
  W: ["10001", "10001", "10001", "10101", "10101", "10101", "01010"],
  X: ["10001", "10001", "01010", "00100", "01010", "10001", "10001"],
  Y: ["10001", "10001", "10001", "01010", "00100", "00100", "00100"],
  Z: ["11111", "00001", "00010", "00100", "01000", "10000", "11111"],
  a: ["00000", "00000", "01110", "00001", "01111", "10001", "01111"],
  b: ["10000", "10000", "11110", "10001", "10001", "10001", "11110"],
  c: ["00000", "00000", "01110", "10000", "10000", "10001", "01110"],
  d: ["00001", "00001", "01111", "10001", "10001", "10001", "01111"],
  e: ["00000", "00000", "01110", "10001", "11111", "10000", "01110"],
  f: ["00110", "01001", "01000", "11100", "01000", "01000", "01000"],
  g: ["00000", "01111", "10001", "10001", "01111", "00001", "01110"],
  h: ["10000", "10000", "11110", "10001", "10001", "10001", "10001"],
  i: ["00100", "00000", "01100", "00100", "00100", "00100", "01110"],
  j: ["00010", "00000", "00110", "00010", "00010", "10010", "01100"],
  k: ["10000", "10000", "10010", "10100", "11000", "10100", "10010"],
  l: ["01100", "00100", "00100", "00100", "00100", "00100", "01110"],
  m: ["00000", "00000", "11010", "10101", "10101", "10101", "10101"],
  n: ["00000", "00000", "11110", "10001", "10001", "10001", "10001"],
  o: ["00000", "00000", "01110", "10001", "10001", "10001", "01110"],
  p: ["00000", "00000", "11110", "10001", "11110", "10000", "10000"],
  q: ["00000", "00000", "01111", "10001", "01111", "00001", "00001"],
  r: ["00000", "00000", "10110", "11001", "10000", "10000", "10000"],
  s: ["00000", "00000", "01111", "10000", "01110", "00001", "11110"],
  t: ["01000", "01000", "11100", "01000", "01000", "01001", "00110"],
  u: ["00000", "00000", "10001", "10001", "10001", "10011", "01101"],
  v: ["00000", "00000", "10001", "10001", "10001", "01010", "00100"],
  w: ["00000", "00000", "10001", "10001", "10101", "10101", "01010"],
  x: ["00000", "00000", "10001", "01010", "00100", "01010", "10001"],
  y: ["00000", "00000", "10001", "10001", "01111", "00001", "01110"],
  z: ["00000", "00000", "11111", "00010", "00100", "01000", "11111"],
};

/** Glyph used for characters missing from the font. */
const FALLBACK_GLYPH: readonly string[] = [
  "11111",
  "10001",
  "10001",
  "10001",
  "10001",
  "10001",
  "11111",
];

export interface TextOptions {
  /** Integer pixel multiplier for the 5x7 glyphs (default 2). */
  scale?: number;
  color?: Color;
  /** Horizontal alignment relative to (x, y), as in SVG text-anchor. */
  anchor?: "start" | "middle" | "end";
  /** Draw rotated 90 degrees counterclockwise (reads bottom-to-top). */
  rotated?: boolean;
}

const BLACK: Color = [0, 0, 0];

// --------------------------------------------------------------------------
// canvas
// --------------------------------------------------------------------------

export class Raster {
  readonly width: number;
  readonly height: number;
  /** RGBA bytes, row-major, initialized to opaque white. */
  readonly data: Uint8Array;

  constructor(width: number, height: number) {
    if (!Number.isInteger(width) || !Number.isInteger(height) ||
        width <= 0 || height <= 0) {
      throw new Error(`invalid raster size ${width}x${height}`);
    }
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4).fill(0xff);
  }

  /** Sets one pixel; coordinates outside the canvas are ignored. */
  set(x: number, y: number, color: Color): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) {
      return;
    }
    const offset = (yi * this.width + xi) * 4;
    this.data[offset] = color[0];
    this.data[offset + 1] = color[1];
    this.data[offset + 2] = color[2];
    this.data[offset + 3] = 0xff;
  }

  /** Straight line between rounded endpoints (Bresenham). */
  drawLine(x0: number, y0: number, x1: number, y1: number,
           color: Color): void {
    let xa = Math.round(x0);
    let ya = Math.round(y0);
    const xb = Math.round(x1);
    const yb = Math.round(y1);
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(xa, ya, color);
      if (xa === xb && ya === yb) {
        break;
      }
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        xa += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ya += sy;
      }
    }
  }

  /** Open circle: a one-pixel-wide ring of radius `r` around (cx, cy). */
  strokeCircle(cx: number, cy: number, r: number, color: Color): void {
    const lo = (r - 0.75) * (r - 0.75);
    const hi = (r + 0.75) * (r + 0.75);
    const extent = Math.ceil(r + 1);
    const xc = Math.round(cx);
    const yc = Math.round(cy);
    for (let dy = -extent; dy <= extent; dy++) {
      for (let dx = -extent; dx <= extent; dx++) {
        const d2 = dx * dx + dy * dy;
        if (d2 >= lo && d2 <= hi) {
          this.set(xc + dx, yc + dy, color);
        }
      }
    }
  }

  /** Advance width of `text` in pixels at the given scale. */
  textWidth(text: string, scale = 2): number {
    return text.length > 0
      ? (text.length * GLYPH_ADVANCE - 1) * scale
      : 0;
  }

  /**
   * Draws `text` with (x, y) on the baseline.  With `rotated` the text
   * reads bottom-to-top and (x, y) is the baseline start, matching an
   * SVG rotate(-90) transform.
   */
  drawText(text: string, x: number, y: number,
           options: TextOptions = {}): void {
    const scale = options.scale ?? 2;
    const color = options.color ?? BLACK;
    const anchor = options.anchor ?? "start";
    const width = this.textWidth(text, scale);
    let shift = 0;
    if (anchor === "middle") {
      shift = -width / 2;
    } else if (anchor === "end") {
      shift = -width;
    }
    for (let i = 0; i < text.length; i++) {
      const glyph = FONT_5X7[text[i]] ?? FALLBACK_GLYPH;
      for (let v = 0; v < GLYPH_HEIGHT; v++) {
        for (let u = 0; u < GLYPH_WIDTH; u++) {
          if (glyph[v][u] !== "1") {
            continue;
          }
          for (let sy = 0; sy < scale; sy++) {
            for (let sx = 0; sx < scale; sx++) {
              // text-space offset of this device pixel from the origin
              const dx = shift + (i * GLYPH_ADVANCE + u) * scale + sx;
              const dy = (v - GLYPH_HEIGHT + 1) * scale + sy;
              if (options.rotated) {
                // rotate -90 degrees: (dx, dy) -> (dy, -dx)
                this.set(x + dy, y - dx, color);
              } else {
                this.set(x + dx, y + dy, color);
              }
            }
          }
        }
      }
    }
  }
}
