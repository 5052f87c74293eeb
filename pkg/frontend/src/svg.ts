import { Figure } from "./figure";
import { formatTick } from "./scale";

const FONT_FAMILY = "Helvetica, Arial, sans-serif";
const TICK_FONT_PX = 13;
const LABEL_FONT_PX = 15;
const TICK_LEN = 6; // px
const FRAME_COLOR = "#333333";
const GRID_COLOR = "#dddddd";

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function px(value: number): string {
  return value.toFixed(2);
}

/**
 * Renders a laid-out figure as a standalone SVG document.
 *
 * The output is a pure function of the figure: fixed styles, no
 * timestamps, no randomness, so repeated renders are byte-identical.
 */
export function figureToSvg(figure: Figure): string {
  const { plot } = figure;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" ` +
      `width="${figure.width}" height="${figure.height}" ` +
      `viewBox="0 0 ${figure.width} ${figure.height}">`
  );
  parts.push(
    `<rect x="0" y="0" width="${figure.width}" height="${figure.height}" ` +
      `fill="#ffffff"/>`
  );

  // grid and tick marks
  for (const tick of figure.xTicks) {
    const x = px(figure.xScale.map(tick));
    parts.push(
      `<line x1="${x}" y1="${px(plot.top)}" x2="${x}" ` +
        `y2="${px(plot.bottom)}" stroke="${GRID_COLOR}" stroke-width="1"/>`
    );
    parts.push(
      `<line x1="${x}" y1="${px(plot.bottom)}" x2="${x}" ` +
        `y2="${px(plot.bottom + TICK_LEN)}" stroke="${FRAME_COLOR}" ` +
        `stroke-width="1"/>`
    );
    parts.push(
      `<text x="${x}" y="${px(plot.bottom + TICK_LEN + TICK_FONT_PX + 2)}" ` +
        `font-family="${FONT_FAMILY}" font-size="${TICK_FONT_PX}" ` +
        `text-anchor="middle">${escapeXml(formatTick(tick))}</text>`
    );
  }
  for (const tick of figure.yTicks) {
    const y = px(figure.yScale.map(tick));
    parts.push(
      `<line x1="${px(plot.left)}" y1="${y}" x2="${px(plot.right)}" ` +
        `y2="${y}" stroke="${GRID_COLOR}" stroke-width="1"/>`
    );
    parts.push(
      `<line x1="${px(plot.left - TICK_LEN)}" y1="${y}" ` +
        `x2="${px(plot.left)}" y2="${y}" stroke="${FRAME_COLOR}" ` +
        `stroke-width="1"/>`
    );
    parts.push(
      `<text x="${px(plot.left - TICK_LEN - 4)}" ` +
        `y="${px(figure.yScale.map(tick) + TICK_FONT_PX / 3)}" ` +
        `font-family="${FONT_FAMILY}" font-size="${TICK_FONT_PX}" ` +
        `text-anchor="end">${escapeXml(formatTick(tick))}</text>`
    );
  }

  // frame above the grid lines
  parts.push(
    `<rect x="${px(plot.left)}" y="${px(plot.top)}" ` +
      `width="${px(plot.right - plot.left)}" ` +
      `height="${px(plot.bottom - plot.top)}" fill="none" ` +
      `stroke="${FRAME_COLOR}" stroke-width="1"/>`
  );

  // axis labels
  const xLabelX = px((plot.left + plot.right) / 2);
  const xLabelY = px(figure.height - 16);
  parts.push(
    `<text x="${xLabelX}" y="${xLabelY}" font-family="${FONT_FAMILY}" ` +
      `font-size="${LABEL_FONT_PX}" text-anchor="middle">` +
      `${escapeXml(figure.xLabel)}</text>`
  );
  const yLabelX = 22;
  const yLabelY = (plot.top + plot.bottom) / 2;
  parts.push(
    `<text x="${px(yLabelX)}" y="${px(yLabelY)}" ` +
      `font-family="${FONT_FAMILY}" font-size="${LABEL_FONT_PX}" ` +
      `text-anchor="middle" ` +
      `transform="rotate(-90 ${px(yLabelX)} ${px(yLabelY)})">` +
      `${escapeXml(figure.yLabel)}</text>`
  );

  // one marker per sampled row
  for (const series of figure.series) {
    for (let i = 0; i < series.px.length; i++) {
      parts.push(
        `<circle cx="${px(series.px[i])}" cy="${px(series.py[i])}" ` +
          `r="${figure.markerRadius}" fill="none" ` +
          `stroke="${series.color}" stroke-width="1"/>`
      );
    }
  }

  // legend
  if (figure.showLegend) {
    const lineHeight = 20;
    let y = plot.top + 16;
    for (const series of figure.series) {
      const cx = plot.right - 150;
      parts.push(
        `<circle cx="${px(cx)}" cy="${px(y - 4)}" ` +
          `r="${figure.markerRadius}" fill="none" ` +
          `stroke="${series.color}" stroke-width="1"/>`
      );
      parts.push(
        `<text x="${px(cx + 10)}" y="${px(y)}" ` +
          `font-family="${FONT_FAMILY}" font-size="${TICK_FONT_PX}" ` +
          `text-anchor="start">${escapeXml(series.label)}</text>`
      );
      y += lineHeight;
    }
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
