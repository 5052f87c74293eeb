import { Figure } from "./figure";
import { parseColor, Raster } from "./raster";
import { formatTick } from "./scale";

const FRAME = parseColor("#333333");
const GRID = parseColor("#dddddd");
const TICK_LEN = 6; // px
const TEXT_SCALE = 2; // 5x7 glyphs doubled: 10x14 px

/**
 * Rasterizes a laid-out figure with the same geometry as the SVG
 * backend: grid, frame, tick labels, axis labels, one open-circle
 * marker per sampled row, and a legend for overlays.
 */
export function figureToRaster(figure: Figure): Raster {
  const raster = new Raster(figure.width, figure.height);
  const { plot } = figure;

  for (const tick of figure.xTicks) {
    const x = figure.xScale.map(tick);
    raster.drawLine(x, plot.top, x, plot.bottom, GRID);
    raster.drawLine(x, plot.bottom, x, plot.bottom + TICK_LEN, FRAME);
    raster.drawText(formatTick(tick), x, plot.bottom + TICK_LEN + 18, {
      scale: TEXT_SCALE,
      anchor: "middle",
    });
  }
  for (const tick of figure.yTicks) {
    const y = figure.yScale.map(tick);
    raster.drawLine(plot.left, y, plot.right, y, GRID);
    raster.drawLine(plot.left - TICK_LEN, y, plot.left, y, FRAME);
    raster.drawText(formatTick(tick), plot.left - TICK_LEN - 4, y + 5, {
      scale: TEXT_SCALE,
      anchor: "end",
    });
  }

  raster.drawLine(plot.left, plot.top, plot.right, plot.top, FRAME);
  raster.drawLine(plot.right, plot.top, plot.right, plot.bottom, FRAME);
  raster.drawLine(plot.right, plot.bottom, plot.left, plot.bottom, FRAME);
  raster.drawLine(plot.left, plot.bottom, plot.left, plot.top, FRAME);

  raster.drawText(figure.xLabel, (plot.left + plot.right) / 2,
                  figure.height - 12, {
                    scale: TEXT_SCALE,
                    anchor: "middle",
                  });
  raster.drawText(figure.yLabel, 26, (plot.top + plot.bottom) / 2, {
    scale: TEXT_SCALE,
    anchor: "middle",
    rotated: true,
  });

  for (const series of figure.series) {
    const color = parseColor(series.color);
    for (let i = 0; i < series.px.length; i++) {
      raster.strokeCircle(series.px[i], series.py[i],
                          figure.markerRadius, color);
    }
  }

  if (figure.showLegend) {
    const lineHeight = 20;
    let y = plot.top + 16;
    for (const series of figure.series) {
      const cx = plot.right - 150;
      raster.strokeCircle(cx, y - 4, figure.markerRadius,
                          parseColor(series.color));
      raster.drawText(series.label, cx + 10, y, { scale: TEXT_SCALE });
      y += lineHeight;
    }
  }

  return raster;
}
