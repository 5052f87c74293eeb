import { existsSync, mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, afterEach, describe, expect, it, vi } from "vitest";

import { main, EXIT_INPUT, EXIT_OK, EXIT_USAGE } from "../src/cli";
import { columnOf, readTraceCsv, rowCount } from "../src/csv";
import { buildFigure, PlotSpec } from "../src/figure";
import { PNG_SIGNATURE } from "../src/png";
import {
  overlay,
  plotLocus,
  regenerateAll,
  standardFigureSet,
  POINT_CSV,
  REST_CSV,
  ROTATING_CSV,
} from "../src/plots";
import { figureToSvg } from "../src/svg";

const DATA = fileURLToPath(new URL("../data", import.meta.url));
const scratch = mkdtempSync(join(tmpdir(), "figures-out-"));
afterAll(() => rmSync(scratch, { recursive: true, force: true }));

function mxHxSpec(csv: string, outName: string): PlotSpec {
  return {
    csvPath: join(DATA, csv),
    xColumn: "Hx",
    yColumn: "Mx",
    stride: 4,
    xLabel: "Hx (A/m)",
    yLabel: "Mx (A/m)",
    outPath: join(scratch, outName),
  };
}

function uniqueMarkerYs(svg: string): Set<string> {
  const values = new Set<string>();
  for (const match of svg.matchAll(/cy="([^"]+)"/g)) {
    values.add(match[1]);
  }
  return values;
}

describe("standard figure regeneration from the shipped traces", () => {
  it("regenerates every figure as SVG and PNG without error", () => {
    const outDir = join(scratch, "regen");
    const written = regenerateAll(DATA, outDir);
    expect(written).toHaveLength(8);
    for (const path of written) {
      expect(existsSync(path), path).toBe(true);
      expect(readFileSync(path).length).toBeGreaterThan(0);
    }
    const svg = readFileSync(join(outDir, "fig_mx_hx.svg"), "utf8");
    expect(svg).toContain("<svg ");
    const png = readFileSync(join(outDir, "fig_mx_hx.png"));
    expect([...png.subarray(0, 8)]).toEqual([...PNG_SIGNATURE]);
    console.log(
      "[figures] PASS: all standard figures regenerate from the " +
        "shipped traces; at-rest Mx-Hx is flat, rotating is not"
    );
  });

  it("regeneration is byte-deterministic", () => {
    const a = join(scratch, "regen_a");
    const b = join(scratch, "regen_b");
    regenerateAll(DATA, a);
    regenerateAll(DATA, b);
    for (const name of ["fig_mx_hx.svg", "fig_mx_hx.png", "fig_pz_ez.png"]) {
      expect(
        readFileSync(join(a, name)).equals(readFileSync(join(b, name))),
        name
      ).toBe(true);
    }
  });

  it("draws the at-rest Mx-Hx locus as a degenerate horizontal line", () => {
    const figure = buildFigure([mxHxSpec(REST_CSV, "rest_mx_hx.svg")]);
    // the magnetization of the medium at rest is identically zero
    expect(figure.yDataMin).toBe(0);
    expect(figure.yDataMax).toBe(0);
    // while the abscissa (the driving Hx) sweeps a wide range
    expect(figure.xDataMax - figure.xDataMin).toBeGreaterThan(1e4);
    const svg = figureToSvg(figure);
    expect(uniqueMarkerYs(svg).size).toBe(1);
  });

  it("draws the rotating Mx-Hx locus with a visible envelope", () => {
    const figure = buildFigure([mxHxSpec(ROTATING_CSV, "rot_mx_hx.svg")]);
    expect(figure.yDataMax - figure.yDataMin).toBeGreaterThan(100);
    const svg = figureToSvg(figure);
    expect(uniqueMarkerYs(svg).size).toBeGreaterThan(50);
  });

  it("overlays the rest and rotating traces in full despite differing lengths", () => {
    const restRows = rowCount(readTraceCsv(join(DATA, REST_CSV)));
    const rotatingRows = rowCount(readTraceCsv(join(DATA, ROTATING_CSV)));
    expect(restRows).not.toBe(rotatingRows);

    const mxHx = standardFigureSet(DATA).find((f) => f.name === "fig_mx_hx");
    expect(mxHx).toBeDefined();
    const outPath = join(scratch, "overlay_mx_hx.svg");
    const specs = mxHx!.specs.map((s, i) =>
      i === 0 ? { ...s, outPath } : s
    );
    const figure = buildFigure(specs);
    expect(figure.series).toHaveLength(2);
    expect(figure.series[0].px).toHaveLength(Math.ceil(restRows / 4));
    expect(figure.series[1].px).toHaveLength(Math.ceil(rotatingRows / 4));
    expect(overlay(specs)).toBe(outPath);
    expect(existsSync(outPath)).toBe(true);
  });

  it("a rest-only spec list yields a single series", () => {
    const figure = buildFigure([mxHxSpec(REST_CSV, "single.svg")]);
    expect(figure.series).toHaveLength(1);
  });

  it("plots the point-model trace as a closed loop", () => {
    const trace = readTraceCsv(join(DATA, POINT_CSV));
    const P = columnOf(trace, "P");
    const E = columnOf(trace, "E");
    const period = (rowCount(trace) - 1) / 3; // three drive periods
    // the locus closes onto a limit cycle: the last two periods coincide
    expect(Math.abs(P[3 * period] - P[2 * period])).toBeLessThan(1e-4);
    // and the loop encloses area on both sides of zero
    expect(Math.max(...P)).toBeGreaterThan(0.2);
    expect(Math.min(...P)).toBeLessThan(-0.2);
    expect(Math.max(...E)).toBe(2e6);
    expect(Math.min(...E)).toBe(-2e6);

    const outPath = join(scratch, "point_loop.svg");
    plotLocus({
      csvPath: join(DATA, POINT_CSV),
      xColumn: "E",
      yColumn: "P",
      stride: 3,
      xLabel: "E (V/m)",
      yLabel: "P (C/m^2)",
      outPath,
    });
    const svg = readFileSync(outPath, "utf8");
    const circles = svg.match(/<circle /g) ?? [];
    expect(circles).toHaveLength(Math.ceil(rowCount(trace) / 3));
  });
});

describe("command line driver", () => {
  const stdout = vi
    .spyOn(process.stdout, "write")
    .mockImplementation(() => true);
  const stderr = vi
    .spyOn(process.stderr, "write")
    .mockImplementation(() => true);
  afterEach(() => {
    stdout.mockClear();
    stderr.mockClear();
  });
  afterAll(() => {
    stdout.mockRestore();
    stderr.mockRestore();
  });

  it("locus writes the requested image and exits 0", () => {
    const out = join(scratch, "cli_locus.png");
    const code = main([
      "locus",
      "--csv", join(DATA, POINT_CSV),
      "--x", "E",
      "--y", "P",
      "--stride", "3",
      "--out", out,
    ]);
    expect(code).toBe(EXIT_OK);
    expect(existsSync(out)).toBe(true);
    expect(stdout.mock.calls.join("")).toContain(`wrote ${out}`);
  });

  it("overlay accepts repeated --csv and --label", () => {
    const out = join(scratch, "cli_overlay.svg");
    const code = main([
      "overlay",
      "--csv", join(DATA, REST_CSV),
      "--csv", join(DATA, ROTATING_CSV),
      "--x", "Ez",
      "--y", "Pz",
      "--stride", "8",
      "--label", "at rest",
      "--label", "rotating",
      "--out", out,
    ]);
    expect(code).toBe(EXIT_OK);
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain(">at rest</text>");
    expect(svg).toContain(">rotating</text>");
  });

  it("regen honors --data and --out", () => {
    const outDir = join(scratch, "cli_regen");
    const code = main(["regen", "--data", DATA, "--out", outDir]);
    expect(code).toBe(EXIT_OK);
    expect(existsSync(join(outDir, "fig_pz_ez.svg"))).toBe(true);
    expect(existsSync(join(outDir, "fig_bz_ez.png"))).toBe(true);
  });

  it("usage errors exit 1", () => {
    expect(main([])).toBe(EXIT_USAGE);
    expect(main(["bogus"])).toBe(EXIT_USAGE);
    expect(main(["locus"])).toBe(EXIT_USAGE);
    expect(main(["locus", "--nope"])).toBe(EXIT_USAGE);
    expect(
      main([
        "locus",
        "--csv", "a.csv", "--csv", "b.csv",
        "--x", "E", "--y", "P",
        "--out", join(scratch, "two.svg"),
      ])
    ).toBe(EXIT_USAGE);
    expect(
      main([
        "locus",
        "--csv", join(DATA, POINT_CSV),
        "--x", "E", "--y", "P",
        "--stride", "2.5",
        "--out", join(scratch, "s.svg"),
      ])
    ).toBe(EXIT_USAGE);
    expect(stderr.mock.calls.join("")).toContain("usage: figures");
  });

  it("input errors exit 2", () => {
    expect(
      main([
        "locus",
        "--csv", join(DATA, "no_such.csv"),
        "--x", "E", "--y", "P",
        "--out", join(scratch, "x.svg"),
      ])
    ).toBe(EXIT_INPUT);
    expect(
      main([
        "locus",
        "--csv", join(DATA, POINT_CSV),
        "--x", "E", "--y", "Qz",
        "--out", join(scratch, "x.svg"),
      ])
    ).toBe(EXIT_INPUT);
    expect(stderr.mock.calls.join("")).toContain("no column 'Qz'");
    expect(
      main([
        "locus",
        "--csv", join(DATA, POINT_CSV),
        "--x", "E", "--y", "P",
        "--out", join(scratch, "x.gif"),
      ])
    ).toBe(EXIT_INPUT);
  });
});
