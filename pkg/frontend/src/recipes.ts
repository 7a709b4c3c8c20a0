/**
 * Figure recipes: which CSV a figure reads, how series are grouped, axis
 * scales/labels and the grey reference lines (channel-opening energies).
 */

import { Row, num } from "./schema.js";

export type Grouper = (row: Row) => string;

export interface FigureRecipe {
  id: string;
  input: string; // CSV file name inside the data directory
  kind: "lines" | "spectra";
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: "linear" | "log";
  yScale: "linear" | "log";
  x: (row: Row) => number;
  y: (row: Row) => number;
  groupBy: Grouper;
  referenceX?: number[];
  requiredColumns: string[];
}

const HBARC_EV_NM = 197.3269804;

const keV = (row: Row) => num(row, "axis_value") / 1e3;
const enhancement = (row: Row) => num(row, "relative_enhancement");
const byField = (row: Row) => `E0 = ${row.field_v_per_m} V/m`;
const byOffset = (row: Row) => `V1 = ${row.offset_v1_ev} eV`;

function lines(partial: Omit<FigureRecipe, "kind">): FigureRecipe {
  return { kind: "lines", ...partial };
}

export const RECIPES: Record<string, FigureRecipe> = {
  F1: lines({
    id: "F1",
    input: "F1.csv",
    title: "Enhancement vs energy, rectangular barrier, three offsets",
    xLabel: "incident energy E (eV)",
    yLabel: "relative enhancement",
    xScale: "linear",
    yScale: "linear",
    x: (r) => num(r, "axis_value"),
    y: enhancement,
    groupBy: byOffset,
    referenceX: [0.12],
    requiredColumns: ["axis_value", "relative_enhancement", "offset_v1_ev"],
  }),
  F2: lines({
    id: "F2",
    input: "F2.csv",
    title: "Enhancement vs energy, higher-order resonances",
    xLabel: "incident energy E (eV)",
    yLabel: "relative enhancement",
    xScale: "linear",
    yScale: "linear",
    x: (r) => num(r, "axis_value"),
    y: enhancement,
    groupBy: byField,
    referenceX: [0.12, 0.24],
    requiredColumns: ["axis_value", "relative_enhancement", "field_v_per_m"],
  }),
  F3: lines({
    id: "F3",
    input: "F3.csv",
    title: "First sidebands vs barrier width",
    xLabel: "barrier width L (nm)",
    yLabel: "transmitted probability",
    xScale: "linear",
    yScale: "log",
    x: (r) => num(r, "axis_value") * HBARC_EV_NM,
    y: () => NaN, // split into two series below
    groupBy: () => "",
    requiredColumns: ["axis_value", "t_p1", "t_m1"],
  }),
  F4: lines({
    id: "F4",
    input: "F4.csv",
    title: "Transmission vs drive frequency: full, static, time-averaged",
    xLabel: "drive frequency (keV)",
    yLabel: "total transmission",
    xScale: "linear",
    yScale: "log",
    x: keV,
    y: () => NaN,
    groupBy: () => "",
    requiredColumns: [
      "axis_value",
      "total_transmission",
      "static_transmission",
      "time_averaged_transmission",
    ],
  }),
  F5: lines({
    id: "F5",
    input: "F5.csv",
    title: "Enhancement vs energy, truncated Coulomb barrier",
    xLabel: "incident energy E (keV)",
    yLabel: "relative enhancement",
    xScale: "linear",
    yScale: "linear",
    x: keV,
    y: enhancement,
    groupBy: byField,
    referenceX: [6.0],
    requiredColumns: ["axis_value", "relative_enhancement", "field_v_per_m"],
  }),
  F6: lines({
    id: "F6",
    input: "F6.csv",
    title: "Transmission vs well depth: channel decomposition",
    xLabel: "well depth V1 (eV)",
    yLabel: "transmitted probability",
    xScale: "log",
    yScale: "log",
    x: (r) => num(r, "axis_value"),
    y: () => NaN,
    groupBy: () => "",
    requiredColumns: ["axis_value", "total_transmission", "t_p0", "t_p1", "t_m1"],
  }),
  F7: {
    id: "F7",
    input: "F7.csv",
    kind: "spectra",
    title: "Rotated-operator spectrum: rays and threshold points",
    xLabel: "Re E (keV)",
    yLabel: "Im E (keV)",
    xScale: "linear",
    yScale: "linear",
    x: (r) => num(r, "re_energy_ev") / 1e3,
    y: (r) => num(r, "im_energy_ev") / 1e3,
    groupBy: (r) => `theta = ${r.theta}`,
    referenceX: [0.0, 6.0, 12.0],
    requiredColumns: [],
  },
  F8: lines({
    id: "F8",
    input: "F8.csv",
    title: "Enhancement vs field strength",
    xLabel: "field strength (V/m)",
    yLabel: "relative enhancement",
    xScale: "log",
    yScale: "log",
    x: (r) => num(r, "axis_value"),
    y: enhancement,
    groupBy: () => "enhancement",
    requiredColumns: ["axis_value", "relative_enhancement"],
  }),
  A9: lines({
    id: "A9",
    input: "A9.csv",
    title: "Enhancement vs energy above a deep exit level",
    xLabel: "incident energy E (eV)",
    yLabel: "relative enhancement",
    xScale: "linear",
    yScale: "linear",
    x: (r) => num(r, "axis_value"),
    y: enhancement,
    groupBy: byField,
    referenceX: [0.12],
    requiredColumns: ["axis_value", "relative_enhancement", "field_v_per_m"],
  }),
  A10: lines({
    id: "A10",
    input: "A10.csv",
    title: "Enhancement vs energy for two drive frequencies",
    xLabel: "incident energy E (keV)",
    yLabel: "relative enhancement",
    xScale: "linear",
    yScale: "linear",
    x: keV,
    y: enhancement,
    groupBy: (r) => `w = ${num(r, "omega_ev") / 1e3} keV, E0 = ${r.field_v_per_m}`,
    requiredColumns: ["axis_value", "relative_enhancement", "omega_ev", "field_v_per_m"],
  }),
  A11: lines({
    id: "A11",
    input: "A11.csv",
    title: "Enhancement vs energy for shifted exit levels",
    xLabel: "incident energy E (keV)",
    yLabel: "relative enhancement",
    xScale: "linear",
    yScale: "linear",
    x: keV,
    y: enhancement,
    groupBy: byOffset,
    referenceX: [6.0],
    requiredColumns: ["axis_value", "relative_enhancement", "offset_v1_ev"],
  }),
  A12: lines({
    id: "A12",
    input: "A12.csv",
    title: "Channel-resolved transmission vs energy",
    xLabel: "incident energy E (keV)",
    yLabel: "transmitted probability",
    xScale: "linear",
    yScale: "log",
    x: keV,
    y: () => NaN,
    groupBy: () => "",
    requiredColumns: ["axis_value", "t_p0", "t_p1", "t_m1"],
  }),
};

/** Figures whose series are fixed columns rather than grouped rows. */
export const MULTI_COLUMN_SERIES: Record<string, Array<[string, string]>> = {
  F3: [
    ["t_p1", "sideband E + w"],
    ["t_m1", "sideband E - w"],
  ],
  F4: [
    ["total_transmission", "full Floquet"],
    ["static_transmission", "static"],
    ["time_averaged_transmission", "time-averaged"],
  ],
  F6: [
    ["total_transmission", "total"],
    ["t_p0", "channel 0"],
    ["t_p1", "channel +1"],
    ["t_m1", "channel -1"],
    ["t_p2", "channel +2"],
    ["t_m2", "channel -2"],
  ],
  A12: [
    ["t_p0", "main channel"],
    ["t_p1", "channel +1"],
    ["t_m1", "channel -1"],
  ],
};
