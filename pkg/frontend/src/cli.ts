/**
 * fb-render: regenerate publication figures from solver CSV datasets.
 *
 *   render --figure F2 --data out/figures --out out/plots
 */

import { availableFigures, renderFigure } from "./render.js";

function parseArgs(argv: string[]): { figure: string; data: string; out: string } {
  const args = argv[0] === "render" ? argv.slice(1) : argv;
  const opts: Record<string, string> = {};
  for (let i = 0; i < args.length; i += 2) {
    const key = args[i];
    const value = args[i + 1];
    if (!key?.startsWith("--") || value === undefined) {
      throw new Error("usage: render --figure <id> --data <dir> --out <dir>");
    }
    opts[key.slice(2)] = value;
  }
  if (!opts.figure || !opts.data || !opts.out) {
    throw new Error("usage: render --figure <id> --data <dir> --out <dir>");
  }
  return { figure: opts.figure, data: opts.data, out: opts.out };
}

export function main(argv: string[]): number {
  try {
    const { figure, data, out } = parseArgs(argv);
    const written = renderFigure(figure, data, out);
    console.log(written);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    console.error(`available figures: ${availableFigures().join(", ")}`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
