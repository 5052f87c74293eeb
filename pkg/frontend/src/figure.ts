import { columnOf, readTraceCsv, rowCount } from "./csv";
import { LinearScale, makeScale, niceTicks, padRange } from "./scale";

/**
 * One locus to draw: which CSV, which columns, and how it should look.
 *
 * `outPath`, `xLabel` and `yLabel` are taken from the first spec when
 * several are overlaid.  The axis labels should carry SI units, e.g.
 * "Ez (V/m)".
 */
export interface PlotSpec {
  /** Trace CSV emitted by the simulator. */
  csvPath: string;
  /** Header name of the abscissa column, e.g. "Ez". */
  xColumn: string;
  /** Header name of the ordinate column, e.g. "Pz". */
  yColumn: string;
  /** Output image path; ".svg" and ".png" select the encoder. */
  outPath: string;
  /** Keep every stride-th sample (markers stay equidistant in time). */
  stride?: number;
  /** Abscissa label with SI units; defaults to the column name. */
  xLabel?: string;
  /** Ordinate label with SI units; defaults to the column name. */
  yLabel?: string;
  /** Legend label; defaults to the CSV file name. */
  label?: string;
  /** Marker color as #rrggbb; defaults to a fixed palette. */
  color?: string;
}

/** A series resolved to data values and pixel coordinates. */
export interface FigureSeries {
  label: string;
  color: string;
  /** Decimated data values. */
  x: number[];
  y: number[];
  /** Pixel coordinates of the markers, same length as `x`. */
  px: number[];
  py: number[];
}

/** A fully laid-out figure, ready for either image backend. */
export interface Figure {
  width: number;
  height: number;
  /** Pixel box of the data area (left < right, top < bottom). */
  plot: { left: number; top: number; right: number; bottom: number };
  xScale: LinearScale;
  yScale: LinearScale;
  xTicks: number[];
  yTicks: number[];
  xLabel: string;
  yLabel: string;
  markerRadius: number;
  series: FigureSeries[];
  /** Whether the renderers should draw a legend box. */
  showLegend: boolean;
  /** Extents of the plotted data before padding (for inspection). */
  xDataMin: number;
  xDataMax: number;
  yDataMin: number;
  yDataMax: number;
}

// --------------------------------------------------------------------------
// fixed styles (deterministic output: no timestamps, no randomness)
// --------------------------------------------------------------------------

export const WIDTH = 860; // px
export const HEIGHT = 640; // px
export const MARKER_RADIUS = 2.6; // px

const MARGIN = { left: 96, right: 24, top: 24, bottom: 64 }; // px

/** Lone-series marker color: small light circles. */
const SINGLE_COLOR = "#4a90d9";

/** Overlay palette: dark first series (rest), light second (rotating). */
const OVERLAY_PALETTE = ["#1b1b1b", "#34a853", "#e08b2d", "#8e44ad"];

// --------------------------------------------------------------------------
// layout
// --------------------------------------------------------------------------

/** Keeps every `stride`-th element starting with the first. */
export function decimate(values: number[], stride: number): number[] {
  if (!Number.isInteger(stride) || stride < 1) {
    throw new Error(`stride must be a positive integer, got ${stride}`);
  }
  if (stride === 1) {
    return values.slice();
  }
  const out: number[] = [];
  for (let i = 0; i < values.length; i += stride) {
    out.push(values[i]);
  }
  return out;
}

function baseName(path: string): string {
  const parts = path.split(/[\\/]/);
  return parts[parts.length - 1].replace(/\.csv$/i, "");
}

/**
 * Reads every spec's CSV, decimates, and lays the loci out on shared
 * axes.  Each series is plotted over its full length, so overlaying
 * traces of different durations simply shows both in full.
 *
 * @throws Error when a referenced column is missing from its CSV
 */
export function buildFigure(specs: PlotSpec[]): Figure {
  if (specs.length === 0) {
    throw new Error("at least one plot spec is required");
  }
  const palette = specs.length === 1 ? [SINGLE_COLOR] : OVERLAY_PALETTE;
  const series: FigureSeries[] = [];
  for (let i = 0; i < specs.length; i++) {
    const spec = specs[i];
    const trace = readTraceCsv(spec.csvPath);
    if (rowCount(trace) === 0) {
      throw new Error(`${spec.csvPath}: trace has no samples`);
    }
    const stride = spec.stride ?? 1;
    series.push({
      label: spec.label ?? baseName(spec.csvPath),
      color: spec.color ?? palette[i % palette.length],
      x: decimate(columnOf(trace, spec.xColumn), stride),
      y: decimate(columnOf(trace, spec.yColumn), stride),
      px: [],
      py: [],
    });
  }

  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const s of series) {
    for (const v of s.x) {
      if (v < xMin) xMin = v;
      if (v > xMax) xMax = v;
    }
    for (const v of s.y) {
      if (v < yMin) yMin = v;
      if (v > yMax) yMax = v;
    }
  }

  const [xLo, xHi] = padRange(xMin, xMax);
  const [yLo, yHi] = padRange(yMin, yMax);
  const plot = {
    left: MARGIN.left,
    top: MARGIN.top,
    right: WIDTH - MARGIN.right,
    bottom: HEIGHT - MARGIN.bottom,
  };
  // The y pixel axis points down, so the data maximum maps to the top.
  const xScale = makeScale(xLo, xHi, plot.left, plot.right);
  const yScale = makeScale(yLo, yHi, plot.bottom, plot.top);

  for (const s of series) {
    s.px = s.x.map(xScale.map);
    s.py = s.y.map(yScale.map);
  }

  return {
    width: WIDTH,
    height: HEIGHT,
    plot,
    xScale,
    yScale,
    xTicks: niceTicks(xLo, xHi),
    yTicks: niceTicks(yLo, yHi),
    xLabel: specs[0].xLabel ?? specs[0].xColumn,
    yLabel: specs[0].yLabel ?? specs[0].yColumn,
    markerRadius: MARKER_RADIUS,
    series,
    showLegend: specs.length > 1 || specs.some((s) => s.label !== undefined),
    xDataMin: xMin,
    xDataMax: xMax,
    yDataMin: yMin,
    yDataMax: yMax,
  };
}
