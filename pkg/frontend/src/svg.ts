/**
 * Hand-assembled SVG line chart: linear x axis, log10 y axis, one polyline
 * plus markers per series, legend in the top-right corner. Output is a pure
 * function of the input series, so re-rendering is byte-identical.
 */

import type { Series } from "./series.js";

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
}

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const MARGIN = { top: 46, right: 24, bottom: 58, left: 78 };

function fmt(v: number): string {
  return v.toFixed(2);
}

function tickText(v: number): string {
  const rounded = Math.round(v * 1e10) / 1e10;
  return String(rounded);
}

/** step from {1, 2, 5} * 10^k giving roughly `target` intervals */
function niceStep(span: number, target: number): number {
  const rough = span / target;
  const power = Math.pow(10, Math.floor(Math.log10(rough)));
  for (const mult of [1, 2, 5, 10]) {
    if (mult * power >= rough) return mult * power;
  }
  return 10 * power;
}

function linearTicks(min: number, max: number): number[] {
  if (min === max) return [min];
  const step = niceStep(max - min, 6);
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + 1e-12; v += step) {
    ticks.push(Math.round(v * 1e10) / 1e10);
  }
  return ticks;
}

function decadeTicks(minExp: number, maxExp: number): number[] {
  const span = maxExp - minExp;
  const step = Math.max(1, Math.ceil(span / 9));
  const ticks: number[] = [];
  for (let e = minExp; e <= maxExp; e += step) ticks.push(e);
  return ticks;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderChart(series: Series[], opts: ChartOptions): string {
  if (series.length === 0) {
    throw new Error("nothing to plot: grouping produced no series");
  }
  const width = opts.width ?? 840;
  const height = opts.height ?? 560;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const positiveYs = series.flatMap((s) =>
    s.points.map((p) => p.y).filter((y) => y > 0),
  );
  if (positiveYs.length === 0) {
    throw new Error("no positive values to place on the log axis");
  }
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  let loExp = Math.floor(Math.log10(Math.min(...positiveYs)));
  let hiExp = Math.ceil(Math.log10(Math.max(...positiveYs)));
  if (loExp === hiExp) {
    loExp -= 1;
    hiExp += 1;
  }

  const xPos = (x: number) =>
    xMax === xMin
      ? MARGIN.left + plotW / 2
      : MARGIN.left + ((x - xMin) / (xMax - xMin)) * plotW;
  const yPos = (y: number) =>
    MARGIN.top + plotH - ((Math.log10(y) - loExp) / (hiExp - loExp)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${fmt(width / 2)}" y="24" text-anchor="middle" font-size="16">` +
      `${esc(opts.title)}</text>`,
  );

  // gridlines and ticks
  for (const e of decadeTicks(loExp, hiExp)) {
    const y = yPos(Math.pow(10, e));
    parts.push(
      `<line x1="${fmt(MARGIN.left)}" y1="${fmt(y)}" x2="${fmt(width - MARGIN.right)}" ` +
        `y2="${fmt(y)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(MARGIN.left - 8)}" y="${fmt(y + 4)}" text-anchor="end" ` +
        `font-size="12">1e${e}</text>`,
    );
  }
  for (const t of linearTicks(xMin, xMax)) {
    const x = xPos(t);
    parts.push(
      `<line x1="${fmt(x)}" y1="${fmt(MARGIN.top)}" x2="${fmt(x)}" ` +
        `y2="${fmt(MARGIN.top + plotH)}" stroke="#eeeeee" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(x)}" y="${fmt(MARGIN.top + plotH + 20)}" text-anchor="middle" ` +
        `font-size="12">${tickText(t)}</text>`,
    );
  }

  // frame and axis labels
  parts.push(
    `<rect x="${fmt(MARGIN.left)}" y="${fmt(MARGIN.top)}" width="${fmt(plotW)}" ` +
      `height="${fmt(plotH)}" fill="none" stroke="#333333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${fmt(MARGIN.left + plotW / 2)}" y="${fmt(height - 14)}" ` +
      `text-anchor="middle" font-size="13">${esc(opts.xLabel)}</text>`,
  );
  parts.push(
    `<text x="20" y="${fmt(MARGIN.top + plotH / 2)}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 20 ${fmt(MARGIN.top + plotH / 2)})">${esc(opts.yLabel)}</text>`,
  );

  // series: polyline segments (split at non-positive values) plus markers
  series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    let segment: string[] = [];
    const flush = () => {
      if (segment.length >= 2) {
        parts.push(
          `<polyline points="${segment.join(" ")}" fill="none" stroke="${color}" ` +
            `stroke-width="1.8"/>`,
        );
      }
      segment = [];
    };
    for (const p of s.points) {
      if (p.y <= 0) {
        flush();
        continue;
      }
      segment.push(`${fmt(xPos(p.x))},${fmt(yPos(p.y))}`);
    }
    flush();
    for (const p of s.points) {
      if (p.y <= 0) continue;
      parts.push(
        `<circle cx="${fmt(xPos(p.x))}" cy="${fmt(yPos(p.y))}" r="3" fill="${color}"/>`,
      );
    }
  });

  // legend
  const legendX = width - MARGIN.right - 280;
  series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const y = MARGIN.top + 14 + idx * 18;
    parts.push(
      `<line x1="${fmt(legendX)}" y1="${fmt(y - 4)}" x2="${fmt(legendX + 26)}" ` +
        `y2="${fmt(y - 4)}" stroke="${color}" stroke-width="1.8"/>`,
    );
    parts.push(
      `<circle cx="${fmt(legendX + 13)}" cy="${fmt(y - 4)}" r="3" fill="${color}"/>`,
    );
    parts.push(
      `<text x="${fmt(legendX + 32)}" y="${fmt(y)}" font-size="12">${esc(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
