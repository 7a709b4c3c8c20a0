/**
 * Figure regeneration checks: every figure id renders a non-empty SVG with
 * the right axis labels and reference lines from solver-produced CSVs, and
 * the schema gate rejects tampered datasets.
 */

import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, describe, expect, it } from "vitest";

import { availableFigures, renderFigure } from "../src/render.js";
import { RECIPES } from "../src/recipes.js";
import { SOLVER_COLUMNS, SchemaError, parseCsv } from "../src/schema.js";
import { main } from "../src/cli.js";

const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), "fixtures");
const tmp = fs.mkdtempSync(path.join(os.tmpdir(), "fbfig-"));

afterAll(() => {
  fs.rmSync(tmp, { recursive: true, force: true });
});

describe("schema validation", () => {
  const fixture = path.join(FIXTURES, "F2.csv");

  it("accepts the published column order", () => {
    const rows = parseCsv(fs.readFileSync(fixture, "utf-8"), SOLVER_COLUMNS);
    expect(rows.length).toBeGreaterThan(0);
  });

  it("rejects a CSV with one column removed", () => {
    const lines = fs.readFileSync(fixture, "utf-8").split("\n");
    const drop = SOLVER_COLUMNS.indexOf("total_transmission");
    const mangled = lines
      .filter((ln) => ln.length > 0)
      .map((ln) => {
        const parts = ln.split(",");
        parts.splice(drop, 1);
        return parts.join(",");
      })
      .join("\n");
    expect(() => parseCsv(mangled, SOLVER_COLUMNS)).toThrow(SchemaError);
  });

  it("rejects an empty dataset", () => {
    expect(() => parseCsv("", SOLVER_COLUMNS)).toThrow(SchemaError);
    expect(() => parseCsv(SOLVER_COLUMNS.join(","), SOLVER_COLUMNS)).toThrow(
      /no data rows/,
    );
  });
});

describe("figure regeneration from solver datasets", () => {
  for (const id of availableFigures()) {
    it(`renders ${id} with labels and reference lines`, () => {
      const out = renderFigure(id, FIXTURES, tmp);
      const svg = fs.readFileSync(out, "utf-8");
      expect(svg.length).toBeGreaterThan(2000);
      expect(svg).toContain("<svg");
      const recipe = RECIPES[id];
      expect(svg).toContain(recipe.xLabel);
      expect(svg).toContain(recipe.yLabel);
      for (const ref of recipe.referenceX ?? []) {
        expect(svg).toContain(`data-x="${Number(ref.toPrecision(6))}"`);
      }
      expect(svg).toContain("legend");
    });
  }

  it("F2 carries the channel-opening reference lines at 0.12 and 0.24 eV", () => {
    const svg = fs.readFileSync(path.join(tmp, "F2.svg"), "utf-8");
    expect(svg).toContain('class="reference-line" data-x="0.12"');
    expect(svg).toContain('class="reference-line" data-x="0.24"');
  });

  it("renders byte-identically on repeated runs", () => {
    const a = fs.readFileSync(renderFigure("F3", FIXTURES, tmp));
    const second = fs.mkdtempSync(path.join(os.tmpdir(), "fbfig2-"));
    const b = fs.readFileSync(renderFigure("F3", FIXTURES, second));
    fs.rmSync(second, { recursive: true, force: true });
    expect(Buffer.compare(a, b)).toBe(0);
  });
});

describe("cli", () => {
  it("renders via the command line interface", () => {
    const code = main(["render", "--figure", "F1", "--data", FIXTURES, "--out", tmp]);
    expect(code).toBe(0);
    expect(fs.existsSync(path.join(tmp, "F1.svg"))).toBe(true);
  });

  it("fails with a listing on unknown ids", () => {
    const code = main(["render", "--figure", "F99", "--data", FIXTURES, "--out", tmp]);
    expect(code).toBe(1);
  });

  it("fails hard when the dataset is missing", () => {
    const code = main(["render", "--figure", "F2", "--data", tmp, "--out", tmp]);
    expect(code).toBe(1);
  });
});
