/**
 * Figure renderer: strict consumer of the solver CSVs (never recomputes).
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { MULTI_COLUMN_SERIES, RECIPES } from "./recipes.js";
import { Row, SOLVER_COLUMNS, SPECTRA_COLUMNS, SchemaError, num, parseCsv } from "./schema.js";
import { Series, renderSvg } from "./svg.js";

const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];
const DASHES = ["", "6 3", "2 2", "8 3 2 3", "4 4", ""];

export function availableFigures(): string[] {
  return Object.keys(RECIPES).sort();
}

export function renderFigure(id: string, dataDir: string, outDir: string): string {
  const recipe = RECIPES[id];
  if (!recipe) {
    throw new Error(`unknown figure id ${id}; available: ${availableFigures().join(", ")}`);
  }
  const csvPath = path.join(dataDir, recipe.input);
  if (!fs.existsSync(csvPath)) {
    throw new Error(`dataset not found: ${csvPath}`);
  }
  const text = fs.readFileSync(csvPath, "utf-8");
  const columns = recipe.kind === "spectra" ? SPECTRA_COLUMNS : SOLVER_COLUMNS;
  const rows = parseCsv(text, columns);
  const ok = rows.filter((r) => recipe.kind === "spectra" || r.error === "");
  if (ok.length === 0) {
    throw new SchemaError("dataset contains only failed rows");
  }

  let series: Series[];
  const multi = MULTI_COLUMN_SERIES[id];
  if (recipe.kind === "spectra") {
    const groups = new Map<string, Row[]>();
    for (const row of ok) {
      const key = `${recipe.groupBy(row)} ${row.classification}`;
      (groups.get(key) ?? groups.set(key, []).get(key)!).push(row);
    }
    series = [...groups.entries()].map(([label, rows], i) => ({
      label,
      points: rows.map((r) => [recipe.x(r), recipe.y(r)] as [number, number]),
      color: label.includes("resonance") ? "#d62728" : PALETTE[i % PALETTE.length],
      markers: true,
      circled: label.includes("resonance"),
    }));
  } else if (multi) {
    series = multi.map(([column, label], i) => ({
      label,
      points: ok.map((r) => [recipe.x(r), num(r, column)] as [number, number]),
      color: PALETTE[i % PALETTE.length],
      dash: DASHES[i % DASHES.length],
    }));
  } else {
    const groups = new Map<string, Row[]>();
    for (const row of ok) {
      const key = recipe.groupBy(row);
      (groups.get(key) ?? groups.set(key, []).get(key)!).push(row);
    }
    series = [...groups.entries()].map(([label, rows], i) => ({
      label,
      points: rows.map((r) => [recipe.x(r), recipe.y(r)] as [number, number]),
      color: PALETTE[i % PALETTE.length],
      dash: DASHES[i % DASHES.length],
    }));
  }

  const svg = renderSvg({
    title: recipe.title,
    xLabel: recipe.xLabel,
    yLabel: recipe.yLabel,
    xScale: recipe.xScale,
    yScale: recipe.yScale,
    series,
    referenceX: recipe.referenceX,
  });
  fs.mkdirSync(outDir, { recursive: true });
  const outPath = path.join(outDir, `${id}.svg`);
  fs.writeFileSync(outPath, svg, "utf-8");
  return outPath;
}
