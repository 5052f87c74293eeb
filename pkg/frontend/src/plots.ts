import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, extname, join } from "node:path";

import { buildFigure, Figure, PlotSpec } from "./figure";
import { encodePng } from "./png";
import { figureToRaster } from "./rasterize";
import { figureToSvg } from "./svg";

/**
 * Writes a laid-out figure to `outPath`, choosing the encoder from the
 * file extension (".svg" or ".png").
 */
export function renderFigure(figure: Figure, outPath: string): void {
  const format = extname(outPath).toLowerCase();
  if (format !== ".svg" && format !== ".png") {
    throw new Error(
      `cannot infer image format from '${outPath}' (use .svg or .png)`
    );
  }
  const parent = dirname(outPath);
  if (parent !== "") {
    mkdirSync(parent, { recursive: true });
  }
  if (format === ".svg") {
    writeFileSync(outPath, figureToSvg(figure));
  } else {
    const raster = figureToRaster(figure);
    writeFileSync(outPath, encodePng(raster.width, raster.height,
                                     raster.data));
  }
}

/** Plots a single locus and returns the written image path. */
export function plotLocus(spec: PlotSpec): string {
  renderFigure(buildFigure([spec]), spec.outPath);
  return spec.outPath;
}

/**
 * Overlays several loci on shared axes (e.g. an at-rest trace against
 * a rotating one).  Output path and axis labels come from the first
 * spec; each series is drawn over its full length even when the traces
 * have different durations.
 */
export function overlay(specs: PlotSpec[]): string {
  renderFigure(buildFigure(specs), specs[0].outPath);
  return specs[0].outPath;
}

// --------------------------------------------------------------------------
// standard figure set over the shipped traces
// --------------------------------------------------------------------------

export const REST_CSV = "cavity_rest.csv";
export const ROTATING_CSV = "cavity_rotating.csv";
export const POINT_CSV = "point_loop.csv";

export interface StandardFigure {
  /** Output file stem, e.g. "fig_mx_hx". */
  name: string;
  specs: PlotSpec[];
}

/**
 * The standard figures regenerated from the shipped traces: the
 * point-model hysteresis loop, the cavity Pz-Ez loop at rest overlaid
 * with the rotating run, the Bz-Ez locus, and the Mx-Hx
 * induced-magnetization locus (flat at rest, open loops when
 * rotating).
 *
 * The `outPath` of each first spec is filled in by the caller.
 */
export function standardFigureSet(dataDir: string): StandardFigure[] {
  const rest = join(dataDir, REST_CSV);
  const rotating = join(dataDir, ROTATING_CSV);
  const point = join(dataDir, POINT_CSV);
  return [
    {
      name: "fig_point_loop",
      specs: [
        {
          csvPath: point,
          xColumn: "E",
          yColumn: "P",
          stride: 3,
          xLabel: "E (V/m)",
          yLabel: "P (C/m^2)",
          outPath: "",
        },
      ],
    },
    {
      name: "fig_pz_ez",
      specs: [
        {
          csvPath: rest,
          xColumn: "Ez",
          yColumn: "Pz",
          stride: 4,
          xLabel: "Ez (V/m)",
          yLabel: "Pz (C/m^2)",
          label: "at rest",
          outPath: "",
        },
        {
          csvPath: rotating,
          xColumn: "Ez",
          yColumn: "Pz",
          stride: 4,
          label: "rotating",
          outPath: "",
        },
      ],
    },
    {
      name: "fig_bz_ez",
      specs: [
        {
          csvPath: rotating,
          xColumn: "Ez",
          yColumn: "Bz",
          stride: 4,
          xLabel: "Ez (V/m)",
          yLabel: "Bz (T)",
          outPath: "",
        },
      ],
    },
    {
      name: "fig_mx_hx",
      specs: [
        {
          csvPath: rest,
          xColumn: "Hx",
          yColumn: "Mx",
          stride: 4,
          xLabel: "Hx (A/m)",
          yLabel: "Mx (A/m)",
          label: "at rest",
          outPath: "",
        },
        {
          csvPath: rotating,
          xColumn: "Hx",
          yColumn: "Mx",
          stride: 4,
          label: "rotating",
          outPath: "",
        },
      ],
    },
  ];
}

/**
 * Regenerates every standard figure as both SVG and PNG and returns
 * the written paths.
 */
export function regenerateAll(dataDir: string, outDir: string): string[] {
  const written: string[] = [];
  for (const figure of standardFigureSet(dataDir)) {
    for (const format of ["svg", "png"] as const) {
      const outPath = join(outDir, `${figure.name}.${format}`);
      const specs = figure.specs.map((spec, i) =>
        i === 0 ? { ...spec, outPath } : spec
      );
      written.push(overlay(specs));
    }
  }
  return written;
}
