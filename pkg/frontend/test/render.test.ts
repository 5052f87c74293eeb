import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { crc32, inflateSync } from "node:zlib";

import { afterAll, describe, expect, it } from "vitest";

import { buildFigure, PlotSpec } from "../src/figure";
import { encodePng, PNG_SIGNATURE } from "../src/png";
import { FONT_5X7, parseColor, Raster } from "../src/raster";
import { figureToRaster } from "../src/rasterize";
import { figureToSvg } from "../src/svg";

const dir = mkdtempSync(join(tmpdir(), "figures-render-"));
afterAll(() => rmSync(dir, { recursive: true, force: true }));

function circleTrace(name: string, rows: number): string {
  const lines = ["t,Ez,Pz"];
  for (let i = 0; i < rows; i++) {
    const phase = (2 * Math.PI * i) / rows;
    lines.push(`${i},${Math.sin(phase)},${Math.cos(phase)}`);
  }
  const path = join(dir, name);
  writeFileSync(path, lines.join("\n") + "\n");
  return path;
}

function spec(csvPath: string, extra: Partial<PlotSpec> = {}): PlotSpec {
  return {
    csvPath,
    xColumn: "Ez",
    yColumn: "Pz",
    outPath: join(dir, "out.svg"),
    ...extra,
  };
}

describe("figureToSvg", () => {
  it("emits one circle per marker plus axis furniture", () => {
    const figure = buildFigure([spec(circleTrace("svg_a.csv", 50))]);
    const svg = figureToSvg(figure);
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    const circles = svg.match(/<circle /g) ?? [];
    expect(circles).toHaveLength(50);
    expect(svg).toContain(">Ez</text>");
    expect(svg).toContain(">Pz</text>");
  });

  it("adds legend circles for overlays", () => {
    const a = circleTrace("svg_b.csv", 10);
    const b = circleTrace("svg_c.csv", 20);
    const svg = figureToSvg(buildFigure([spec(a), spec(b)]));
    const circles = svg.match(/<circle /g) ?? [];
    expect(circles).toHaveLength(10 + 20 + 2);
    expect(svg).toContain(">svg_b</text>");
    expect(svg).toContain(">svg_c</text>");
  });

  it("escapes XML metacharacters in labels", () => {
    const figure = buildFigure([
      spec(circleTrace("svg_d.csv", 4), { xLabel: 'P<z> & "q"' }),
    ]);
    const svg = figureToSvg(figure);
    expect(svg).toContain("P&lt;z&gt; &amp; &quot;q&quot;");
    expect(svg).not.toContain('P<z> & "q"');
  });

  it("is deterministic", () => {
    const path = circleTrace("svg_e.csv", 25);
    const first = figureToSvg(buildFigure([spec(path)]));
    const second = figureToSvg(buildFigure([spec(path)]));
    expect(second).toBe(first);
  });
});

describe("Raster", () => {
  it("starts out opaque white and sets pixels in bounds only", () => {
    const raster = new Raster(4, 3);
    expect(raster.data[0]).toBe(0xff);
    raster.set(1, 1, [10, 20, 30]);
    const offset = (1 * 4 + 1) * 4;
    expect([...raster.data.subarray(offset, offset + 4)]).toEqual(
      [10, 20, 30, 0xff]
    );
    raster.set(-1, 0, [0, 0, 0]);
    raster.set(4, 2, [0, 0, 0]);
    expect(raster.data[3]).toBe(0xff);
  });

  it("rejects a non-positive size", () => {
    expect(() => new Raster(0, 5)).toThrow(/invalid raster size/);
  });

  it("draws text pixels for every character of the axis labels", () => {
    const used = new Set(
      "Ez (V/m) Pz (C/m^2) Hx (A/m) Mx Bz (T) E P at rest rotating " +
        "0123456789 .-+e"
    );
    for (const char of used) {
      expect(FONT_5X7[char], `missing glyph '${char}'`).toBeDefined();
    }
    const raster = new Raster(200, 40);
    raster.drawText("Ez (V/m)", 4, 30, { scale: 2 });
    let dark = 0;
    for (let i = 0; i < raster.data.length; i += 4) {
      if (raster.data[i] !== 0xff) dark++;
    }
    expect(dark).toBeGreaterThan(100);
  });

  it("draws rotated text without leaving the canvas", () => {
    const raster = new Raster(40, 200);
    raster.drawText("Pz (C/m^2)", 20, 120, {
      scale: 2,
      anchor: "middle",
      rotated: true,
    });
    let dark = 0;
    for (let i = 0; i < raster.data.length; i += 4) {
      if (raster.data[i] !== 0xff) dark++;
    }
    expect(dark).toBeGreaterThan(100);
  });

  it("parses #rrggbb colors and rejects other forms", () => {
    expect(parseColor("#4a90d9")).toEqual([0x4a, 0x90, 0xd9]);
    expect(() => parseColor("red")).toThrow(/#rrggbb/);
    expect(() => parseColor("#fff")).toThrow(/#rrggbb/);
  });
});

function chunksOf(png: Buffer): Array<{
  type: string;
  payload: Buffer;
  crc: number;
}> {
  const out: Array<{ type: string; payload: Buffer; crc: number }> = [];
  let offset = PNG_SIGNATURE.length;
  while (offset < png.length) {
    const length = png.readUInt32BE(offset);
    const type = png.toString("ascii", offset + 4, offset + 8);
    out.push({
      type,
      payload: png.subarray(offset + 8, offset + 8 + length),
      crc: png.readUInt32BE(offset + 8 + length),
    });
    offset += 12 + length;
  }
  return out;
}

describe("encodePng", () => {
  it("writes a structurally valid truecolor-alpha PNG", () => {
    const raster = new Raster(7, 5);
    raster.set(3, 2, [200, 10, 10]);
    const png = encodePng(raster.width, raster.height, raster.data);
    expect([...png.subarray(0, 8)]).toEqual([...PNG_SIGNATURE]);

    const chunks = chunksOf(png);
    expect(chunks.map((c) => c.type)).toEqual(["IHDR", "IDAT", "IEND"]);

    const ihdr = chunks[0].payload;
    expect(ihdr.readUInt32BE(0)).toBe(7);
    expect(ihdr.readUInt32BE(4)).toBe(5);
    expect(ihdr[8]).toBe(8); // bit depth
    expect(ihdr[9]).toBe(6); // truecolor with alpha
    expect(ihdr[12]).toBe(0); // no interlace

    for (const chunk of chunks) {
      const expected =
        crc32(chunk.payload, crc32(Buffer.from(chunk.type, "ascii"))) >>> 0;
      expect(chunk.crc).toBe(expected);
    }

    const raw = inflateSync(chunks[1].payload);
    expect(raw.length).toBe(5 * (1 + 7 * 4));
    // scanline 2, filter byte + 3 pixels in, red channel
    expect(raw[2 * (1 + 7 * 4) + 1 + 3 * 4]).toBe(200);
    expect(raw[2 * (1 + 7 * 4)]).toBe(0); // filter type None
  });

  it("rejects a pixel buffer of the wrong size", () => {
    expect(() => encodePng(2, 2, new Uint8Array(3))).toThrow(
      /expected 16 bytes|has 3 bytes/
    );
  });

  it("is deterministic for a full figure render", () => {
    const path = circleTrace("png_a.csv", 30);
    const build = () => {
      const raster = figureToRaster(buildFigure([spec(path)]));
      return encodePng(raster.width, raster.height, raster.data);
    };
    expect(build().equals(build())).toBe(true);
  });
});
