/**
 * Grouping of sweep rows into plot series: one series per
 * (impairment_type, nbar) pair, points ordered along the x field.
 */

import type { SweepRow, XField } from "./schema.js";

export interface SeriesPoint {
  x: number;
  y: number;
  rawX: string;
  rawY: string;
}

export interface Series {
  impairmentType: string;
  nbar: number;
  label: string;
  points: SeriesPoint[];
}

function legendLabel(rows: SweepRow[]): string {
  const { impairment_type, nbar, max_affected } = rows[0];
  const affected = new Set(rows.map((r) => r.affected_count));
  // affected varies along a fraction sweep; only quote it when constant
  const counts =
    affected.size === 1
      ? `max ${max_affected}, affected ${rows[0].affected_count}`
      : `max ${max_affected}`;
  return `${impairment_type} nbar=${nbar} (${counts})`;
}

export function buildSeries(rows: SweepRow[], xField: XField): Series[] {
  const groups = new Map<string, SweepRow[]>();
  for (const row of rows) {
    const key = `${row.impairment_type}|${row.nbar}`;
    const group = groups.get(key);
    if (group) group.push(row);
    else groups.set(key, [row]);
  }
  const keys = [...groups.keys()].sort();
  return keys.map((key) => {
    const group = [...groups.get(key)!].sort((a, b) => a[xField] - b[xField]);
    return {
      impairmentType: group[0].impairment_type,
      nbar: group[0].nbar,
      label: legendLabel(group),
      points: group.map((r) => ({
        x: r[xField],
        y: r.nmse_mean,
        rawX: r.raw[xField],
        rawY: r.raw.nmse_mean,
      })),
    };
  });
}

/**
 * Debug CSV of the exact plotted values, cell text copied verbatim from the
 * input so the file diffs clean against it.
 */
export function exportPoints(series: Series[], xField: XField): string {
  const lines = [`impairment_type,nbar,${xField},nmse_mean`];
  for (const s of series) {
    for (const p of s.points) {
      lines.push(`${s.impairmentType},${s.nbar},${p.rawX},${p.rawY}`);
    }
  }
  return lines.join("\n") + "\n";
}
