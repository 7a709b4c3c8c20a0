/**
 * CSV schema published by the floquet-barrier solver.
 *
 * The header must match this column order exactly; a dataset whose header
 * deviates (missing, extra or reordered columns) is rejected before any
 * rendering happens.
 */

const CHANNELS = [-4, -3, -2, -1, 0, 1, 2, 3, 4];

export const SOLVER_COLUMNS: readonly string[] = [
  "schema_version",
  "axis",
  "axis_value",
  "energy_ev",
  "omega_ev",
  "field_v_per_m",
  "mass_ev",
  "charge_factor",
  "potential_kind",
  "barrier_height_ev",
  "barrier_length",
  "coulomb_strength",
  "inner_radius",
  "offset_v1_ev",
  "half_width",
  "strategy",
  "threshold_regularized",
  "unitarity_deficit",
  "total_transmission",
  "total_reflection",
  "static_transmission",
  "time_averaged_transmission",
  "relative_enhancement",
  ...CHANNELS.map((n) => `t_${n < 0 ? "m" : "p"}${Math.abs(n)}`),
  ...CHANNELS.map((n) => `r_${n < 0 ? "m" : "p"}${Math.abs(n)}`),
  "error",
];

export const SPECTRA_COLUMNS: readonly string[] = [
  "theta",
  "re_energy_ev",
  "im_energy_ev",
  "classification",
];

export class SchemaError extends Error {}

export interface Row {
  [column: string]: string;
}

/** Parse a solver CSV (no quoting in the schema: plain comma separation). */
export function parseCsv(text: string, columns: readonly string[]): Row[] {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty file: no header row");
  }
  const header = lines[0].split(",");
  if (header.length !== columns.length || header.some((h, i) => h !== columns[i])) {
    throw new SchemaError(
      `header does not match the published schema: expected ${columns.length} ` +
        `columns starting ${columns[0]}..., got ${header.length}`,
    );
  }
  const rows: Row[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(`row has ${parts.length} fields, expected ${columns.length}`);
    }
    const row: Row = {};
    columns.forEach((c, i) => (row[c] = parts[i]));
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new SchemaError("empty dataset: header only, no data rows");
  }
  return rows;
}

export function num(row: Row, column: string): number {
  const raw = row[column];
  if (raw === undefined) {
    throw new SchemaError(`missing column ${column}`);
  }
  if (raw === "") {
    return NaN;
  }
  return Number(raw);
}
