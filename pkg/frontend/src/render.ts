/**
 * Top-level rendering flow: CSV in, image file out. The input is never
 * modified; the optional export-points file holds the plotted values
 * verbatim for diffing.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseSweepCsv, type XField } from "./schema.js";
import { buildSeries, exportPoints, type Series } from "./series.js";
import { renderChart } from "./svg.js";

export interface PlotSpec {
  csvPath: string;
  xField: XField;
  outPath: string;
  title?: string;
  exportPointsPath?: string;
}

const X_LABELS: Record<XField, string> = {
  snr_db: "SNR [dB]",
  fraction: "fraction of affected impedances",
};

export interface RenderResult {
  series: Series[];
  outPath: string;
}

async function toImageBytes(svg: string, outPath: string): Promise<Buffer | string> {
  if (!outPath.toLowerCase().endsWith(".png")) {
    return svg;
  }
  const { Resvg } = await import("@resvg/resvg-js");
  return new Resvg(svg).render().asPng();
}

export async function render(spec: PlotSpec): Promise<RenderResult> {
  const rows = parseSweepCsv(readFileSync(spec.csvPath, "utf-8"));
  const series = buildSeries(rows, spec.xField);
  const svg = renderChart(series, {
    title: spec.title ?? `NMSE vs ${spec.xField}`,
    xLabel: X_LABELS[spec.xField],
    yLabel: "NMSE",
  });
  writeFileSync(spec.outPath, await toImageBytes(svg, spec.outPath));
  if (spec.exportPointsPath) {
    writeFileSync(spec.exportPointsPath, exportPoints(series, spec.xField));
  }
  return { series, outPath: spec.outPath };
}
