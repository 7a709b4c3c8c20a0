/**
 * Minimal deterministic SVG line/scatter plotter.
 *
 * Pure string assembly: rendering the same data twice yields byte-identical
 * files (no timestamps, no randomness).
 */

export type Scale = "linear" | "log";

export interface Series {
  label: string;
  points: Array<[number, number]>;
  color: string;
  dash?: string;
  markers?: boolean;
  circled?: boolean;
}

export interface PlotSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  series: Series[];
  referenceX?: number[];
  width?: number;
  height?: number;
}

const MARGIN = { left: 74, right: 16, top: 34, bottom: 52 };

function fmt(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

function ticks(lo: number, hi: number, scale: Scale): number[] {
  if (scale === "log") {
    const out: number[] = [];
    const e0 = Math.ceil(Math.log10(lo) - 1e-9);
    const e1 = Math.floor(Math.log10(hi) + 1e-9);
    for (let e = e0; e <= e1; e++) out.push(Math.pow(10, e));
    if (out.length >= 2) return out;
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
  const mult = span / step > 8 ? 2 : 1;
  const out: number[] = [];
  const start = Math.ceil(lo / (step * mult)) * step * mult;
  for (let v = start; v <= hi + 1e-12 * span; v += step * mult) out.push(v);
  return out;
}

export function renderSvg(spec: PlotSpec): string {
  const width = spec.width ?? 640;
  const height = spec.height ?? 420;
  const iw = width - MARGIN.left - MARGIN.right;
  const ih = height - MARGIN.top - MARGIN.bottom;

  const finite = (v: number) => Number.isFinite(v) && (spec.xScale !== "log" || v > 0);
  const pts = spec.series.flatMap((s) => s.points);
  const xs = pts.map((p) => p[0]).filter((v) => Number.isFinite(v));
  const ys = pts
    .map((p) => p[1])
    .filter((v) => Number.isFinite(v) && (spec.yScale !== "log" || v > 0));
  if (xs.length === 0 || ys.length === 0) {
    throw new Error("nothing to plot: no finite data points");
  }
  let xLo = Math.min(...xs, ...(spec.referenceX ?? []));
  let xHi = Math.max(...xs, ...(spec.referenceX ?? []));
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (xLo === xHi) [xLo, xHi] = [xLo - 1, xHi + 1];
  if (yLo === yHi) [yLo, yHi] = [yLo - 1, yHi + 1];
  if (spec.yScale === "linear") {
    const pad = 0.06 * (yHi - yLo);
    yLo -= pad;
    yHi += pad;
  } else {
    yLo /= 1.5;
    yHi *= 1.5;
  }

  const px = (v: number) =>
    MARGIN.left +
    (iw *
      (spec.xScale === "log"
        ? Math.log(v / xLo) / Math.log(xHi / xLo)
        : (v - xLo) / (xHi - xLo)));
  const py = (v: number) =>
    MARGIN.top +
    ih -
    ih *
      (spec.yScale === "log"
        ? Math.log(v / yLo) / Math.log(yHi / yLo)
        : (v - yLo) / (yHi - yLo));

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
  );
  out.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  out.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" font-size="14" font-family="sans-serif">${spec.title}</text>`,
  );

  // frame
  out.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${iw}" height="${ih}" fill="none" stroke="black"/>`,
  );
  for (const t of ticks(xLo, xHi, spec.xScale)) {
    if (t < xLo - 1e-12 || t > xHi * (1 + 1e-12)) continue;
    const x = px(t);
    out.push(`<line x1="${fmt(x)}" y1="${MARGIN.top + ih}" x2="${fmt(x)}" y2="${MARGIN.top + ih + 5}" stroke="black"/>`);
    out.push(
      `<text x="${fmt(x)}" y="${MARGIN.top + ih + 18}" text-anchor="middle" font-size="11" font-family="sans-serif">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(yLo, yHi, spec.yScale)) {
    if (t < yLo || t > yHi) continue;
    const y = py(t);
    out.push(`<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="black"/>`);
    out.push(
      `<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end" font-size="11" font-family="sans-serif">${t.toExponential(0)}</text>`,
    );
  }
  out.push(
    `<text x="${MARGIN.left + iw / 2}" y="${height - 12}" text-anchor="middle" font-size="13" font-family="sans-serif">${spec.xLabel}</text>`,
  );
  out.push(
    `<text x="18" y="${MARGIN.top + ih / 2}" text-anchor="middle" font-size="13" font-family="sans-serif" transform="rotate(-90 18 ${MARGIN.top + ih / 2})">${spec.yLabel}</text>`,
  );

  for (const refx of spec.referenceX ?? []) {
    if (refx < xLo || refx > xHi) continue;
    out.push(
      `<line x1="${fmt(px(refx))}" y1="${MARGIN.top}" x2="${fmt(px(refx))}" y2="${MARGIN.top + ih}" stroke="grey" stroke-dasharray="4 3" class="reference-line" data-x="${fmt(refx)}"/>`,
    );
  }

  spec.series.forEach((s, i) => {
    const pts = s.points.filter(
      (p) =>
        finite(p[0]) &&
        Number.isFinite(p[1]) &&
        (spec.yScale !== "log" || p[1] > 0),
    );
    if (pts.length === 0) return;
    if (!s.markers) {
      const path = pts.map((p) => `${fmt(px(p[0]))},${fmt(py(p[1]))}`).join(" ");
      out.push(
        `<polyline fill="none" stroke="${s.color}" stroke-width="1.6"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""} points="${path}" class="series" data-label="${s.label}"/>`,
      );
    } else {
      for (const p of pts) {
        out.push(
          `<circle cx="${fmt(px(p[0]))}" cy="${fmt(py(p[1]))}" r="${s.circled ? 5 : 2.4}" fill="${s.circled ? "none" : s.color}" stroke="${s.color}" class="marker" data-label="${s.label}"/>`,
        );
      }
    }
    const ly = MARGIN.top + 14 + 14 * i;
    out.push(
      `<line x1="${width - 170}" y1="${ly - 4}" x2="${width - 146}" y2="${ly - 4}" stroke="${s.color}"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""}/>`,
    );
    out.push(
      `<text x="${width - 140}" y="${ly}" font-size="11" font-family="sans-serif" class="legend">${s.label}</text>`,
    );
  });

  out.push("</svg>");
  return out.join("\n") + "\n";
}
