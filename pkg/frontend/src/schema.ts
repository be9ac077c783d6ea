/**
 * Sweep-CSV schema: the fixed 17-column record layout the simulator writes.
 * Raw cell text is kept alongside parsed numbers so exported debug points
 * diff clean against the input file.
 */

import Papa from "papaparse";

export const SWEEP_COLUMNS = [
  "impairment_type",
  "nbar",
  "q",
  "n",
  "m_t",
  "m_r",
  "t_pilots",
  "snr_db",
  "fraction",
  "max_affected",
  "affected_count",
  "trials",
  "nmse_mean",
  "nmse_median",
  "nmse_std",
  "noise_mode",
  "master_seed",
] as const;

export type SweepColumn = (typeof SWEEP_COLUMNS)[number];

export const X_FIELDS = ["snr_db", "fraction"] as const;
export type XField = (typeof X_FIELDS)[number];

const NUMERIC_COLUMNS: SweepColumn[] = [
  "nbar", "q", "n", "m_t", "m_r", "t_pilots", "snr_db", "fraction",
  "max_affected", "affected_count", "trials", "nmse_mean", "nmse_median",
  "nmse_std", "master_seed",
];

export class SchemaError extends Error {}

export interface SweepRow {
  impairment_type: string;
  nbar: number;
  snr_db: number;
  fraction: number;
  max_affected: number;
  affected_count: number;
  nmse_mean: number;
  /** untouched cell text by column name */
  raw: Record<string, string>;
}

export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`CSV parse error: ${first.message} (row ${first.row})`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = SWEEP_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`missing column(s): ${missing.join(", ")}`);
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("CSV has a header but no records");
  }
  return parsed.data.map((cells, i) => {
    for (const col of NUMERIC_COLUMNS) {
      if (!Number.isFinite(Number(cells[col]))) {
        throw new SchemaError(
          `row ${i + 1}: column ${col} is not numeric: ${JSON.stringify(cells[col])}`,
        );
      }
    }
    return {
      impairment_type: cells.impairment_type,
      nbar: Number(cells.nbar),
      snr_db: Number(cells.snr_db),
      fraction: Number(cells.fraction),
      max_affected: Number(cells.max_affected),
      affected_count: Number(cells.affected_count),
      nmse_mean: Number(cells.nmse_mean),
      raw: cells,
    };
  });
}
