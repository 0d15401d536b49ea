/**
 * The three figure builders. Each consumes parsed CLI artifacts (never a
 * simulator configuration — these functions draw what the tables say and
 * recompute nothing) and returns standalone SVG markup.
 *
 * Element contract, relied on by the tests:
 *   - every data curve is a <polyline class="curve">
 *   - scatter/sweep points are <circle class="point ...">
 *   - the narrowing trajectory is a <polyline class="trajectory"> whose
 *     marker-end is the pump-direction arrowhead (<marker id="pump-arrow">)
 *   - guide lines are <line class="guide"> with a stroke-dasharray
 *   - legend entries are <text class="legend-label">
 */

import { CsvTable, commentValue, numericColumn } from "./csv.js";
import {
  SvgNode,
  document,
  el,
  extentOf,
  frame,
  linearScale,
  padded,
  polylinePoints,
  ticks,
} from "./svg.js";

/** Qualitative palette (Tol bright) — one entry per curve or group. */
export const PALETTE = [
  "#4477aa",
  "#ee6677",
  "#228833",
  "#ccbb44",
  "#66ccee",
  "#aa3377",
  "#bbbbbb",
];

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { top: 24, right: 24, bottom: 52, left: 64 };

function scales(
  xDomain: [number, number],
  yDomain: [number, number],
): { sx: ReturnType<typeof linearScale>; sy: ReturnType<typeof linearScale> } {
  return {
    sx: linearScale(xDomain, [MARGIN.left, WIDTH - MARGIN.right]),
    sy: linearScale(yDomain, [HEIGHT - MARGIN.bottom, MARGIN.top]),
  };
}

function legend(labels: { text: string; color: string }[], x: number, y: number): SvgNode {
  const g = el("g", { class: "legend", "font-size": 12 });
  labels.forEach((entry, i) => {
    const yy = y + 18 * i;
    g.children.push(
      el("line", {
        x1: x,
        y1: yy - 4,
        x2: x + 22,
        y2: yy - 4,
        stroke: entry.color,
        "stroke-width": 2,
      }),
      el("text", { class: "legend-label", x: x + 28, y: yy, fill: "#000" }, entry.text),
    );
  });
  return g;
}

// ------------------------------------------------------------- spectrum

/**
 * Overlay one normalized spectrum per table on a shared frequency axis.
 * Curve labels come from each file's `# W = ...` comment when present.
 */
export function plotSpectrum(tables: CsvTable[]): string {
  if (tables.length === 0) {
    throw new Error("plotSpectrum needs at least one spectrum table");
  }
  const curves = tables.map((t) => ({
    x: numericColumn(t, "omega_offset"),
    y: numericColumn(t, "intensity"),
    label: commentValue(t, "W"),
  }));

  const xDomain = padded(extentOf(curves.flatMap((c) => c.x)), 0.02);
  const yTop = Math.max(...curves.flatMap((c) => c.y));
  const { sx, sy } = scales(xDomain, [0, yTop * 1.06]);

  const normalized = curves.every((c) => Math.abs(Math.max(...c.y) - 1) < 1e-9);
  const marks = el("g", { class: "curves", fill: "none", "stroke-width": 1.8 });
  curves.forEach((c, i) => {
    marks.children.push(
      el("polyline", {
        class: "curve",
        points: polylinePoints(c.x, c.y, sx, sy),
        stroke: PALETTE[i % PALETTE.length]!,
      }),
    );
  });

  const children: SvgNode[] = [
    frame(sx, sy, {
      width: WIDTH,
      height: HEIGHT,
      margin: MARGIN,
      xLabel: "omega - omega_ca (units of gamma_ca)",
      yLabel: normalized ? "intensity (peak-normalized)" : "intensity",
    }),
    marks,
  ];

  const entries = curves.map((c, i) => ({
    text: c.label === null ? `curve ${i + 1}` : `W = ${Number(c.label)}`,
    color: PALETTE[i % PALETTE.length]!,
  }));
  children.push(legend(entries, WIDTH - MARGIN.right - 150, MARGIN.top + 16));

  return document(WIDTH, HEIGHT, ...children);
}

// ------------------------------------------------------ narrowing sweep

export interface SweepSummary {
  bracketed: boolean;
  delta_omega_min: number | null;
  n_max: number | null;
  status?: string;
}

export function readSweepSummary(raw: unknown, file: string): SweepSummary {
  if (typeof raw !== "object" || raw === null) {
    throw new Error(`${file}: summary is not a JSON object`);
  }
  const obj = raw as Record<string, unknown>;
  if (typeof obj.bracketed !== "boolean") {
    throw new Error(`${file}: summary lacks a boolean "bracketed" field`);
  }
  const num = (k: string): number | null => {
    const v = obj[k];
    if (v === null || v === undefined) return null;
    if (typeof v !== "number") throw new Error(`${file}: field "${k}" is not a number`);
    return v;
  };
  return {
    bracketed: obj.bracketed,
    delta_omega_min: num("delta_omega_min"),
    n_max: num("n_max"),
    status: typeof obj.status === "string" ? obj.status : undefined,
  };
}

/**
 * Parametric (delta_omega, n) trajectory of a pump sweep, one marker per
 * usable sweep point, the pump direction shown by an arrowhead at the
 * high-W end. With a bracketed summary, dashed guides mark delta_omega_min
 * and n_max; otherwise the guides are omitted and a warning is returned.
 */
export function plotNarrowing(
  sweep: CsvTable,
  summary: SweepSummary,
): { svg: string; warnings: string[] } {
  const warnings: string[] = [];
  const W = numericColumn(sweep, "W");
  const dom = numericColumn(sweep, "delta_omega");
  const n = numericColumn(sweep, "n");

  const keep: number[] = [];
  for (let i = 0; i < W.length; i++) {
    if (Number.isNaN(dom[i]!) || Number.isNaN(n[i]!)) continue;
    keep.push(i);
  }
  if (keep.length === 0) {
    throw new Error(`${sweep.file}: every sweep row is marked failed`);
  }
  if (keep.length < W.length) {
    warnings.push(`${sweep.file}: skipped ${W.length - keep.length} failed sweep points`);
  }
  const xs = keep.map((i) => dom[i]!);
  const ys = keep.map((i) => n[i]!);

  const xDomain = padded(extentOf(xs));
  const yDomain = padded(extentOf(ys));
  const { sx, sy } = scales(xDomain, yDomain);

  const defs = el(
    "defs",
    {},
    el(
      "marker",
      {
        id: "pump-arrow",
        viewBox: "0 0 10 10",
        refX: 9,
        refY: 5,
        markerWidth: 8,
        markerHeight: 8,
        orient: "auto-start-reverse",
      },
      el("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#333" }),
    ),
  );

  const marks = el("g", { class: "sweep" });
  marks.children.push(
    el("polyline", {
      class: "trajectory",
      points: polylinePoints(xs, ys, sx, sy),
      fill: "none",
      stroke: "#333",
      "stroke-width": 1.5,
      "marker-end": "url(#pump-arrow)",
    }),
  );
  xs.forEach((x, j) => {
    marks.children.push(
      el("circle", {
        class: "point",
        cx: sx(x).toFixed(2),
        cy: sy(ys[j]!).toFixed(2),
        r: 3,
        fill: PALETTE[0]!,
        stroke: "#fff",
        "stroke-width": 0.8,
      }),
    );
  });

  const guides = el("g", { class: "guides", stroke: "#cc3311", "stroke-dasharray": "6 4" });
  if (summary.bracketed && summary.delta_omega_min !== null && summary.n_max !== null) {
    const gx = sx(summary.delta_omega_min);
    const gy = sy(summary.n_max);
    guides.children.push(
      el("line", {
        class: "guide",
        x1: gx,
        y1: sy.range[0],
        x2: gx,
        y2: sy.range[1],
      }),
      el("line", {
        class: "guide",
        x1: sx.range[0],
        y1: gy,
        x2: sx.range[1],
        y2: gy,
      }),
    );
  } else {
    warnings.push(
      `${sweep.file}: ${summary.status ?? "saturation not bracketed"} — drawing no guide lines`,
    );
  }

  const svg = document(
    WIDTH,
    HEIGHT,
    defs,
    frame(sx, sy, {
      width: WIDTH,
      height: HEIGHT,
      margin: MARGIN,
      xLabel: "delta_omega (units of gamma_ca)",
      yLabel: "n (band photon number)",
    }),
    guides,
    marks,
  );
  return { svg, warnings };
}

// ------------------------------------------------------- n_max versus N

export interface NmaxPoint {
  n_atoms: number;
  n_max: number;
}

export interface NmaxGroup {
  label: string;
  points: NmaxPoint[];
}

export function readNmaxGroups(raw: unknown, file: string): NmaxGroup[] {
  if (typeof raw !== "object" || raw === null || !Array.isArray((raw as any).groups)) {
    throw new Error(`${file}: expected an object with a "groups" array`);
  }
  const groups = (raw as { groups: unknown[] }).groups.map((g, gi) => {
    if (typeof g !== "object" || g === null) {
      throw new Error(`${file}: group ${gi} is not an object`);
    }
    const rec = g as Record<string, unknown>;
    const label =
      typeof rec.label === "string"
        ? rec.label
        : rec.inverse_width !== undefined
          ? String(rec.inverse_width)
          : `group ${gi + 1}`;
    if (!Array.isArray(rec.points) || rec.points.length === 0) {
      throw new Error(`${file}: group ${JSON.stringify(label)} has no points`);
    }
    const points = rec.points.map((p, pi) => {
      const pt = p as Record<string, unknown>;
      if (typeof pt.n_atoms !== "number" || typeof pt.n_max !== "number") {
        throw new Error(
          `${file}: group ${JSON.stringify(label)} point ${pi} needs numeric n_atoms and n_max`,
        );
      }
      return { n_atoms: pt.n_atoms, n_max: pt.n_max };
    });
    return { label, points };
  });
  if (groups.length === 0) {
    throw new Error(`${file}: "groups" is empty`);
  }
  return groups;
}

/**
 * Scatter of n_max against atom number, one color per group (a group is
 * one coherence time; several markers may share an N). The x axis ticks
 * sit on the integers spanned by the data.
 */
export function plotNmaxVsN(groups: NmaxGroup[]): string {
  const allN = groups.flatMap((g) => g.points.map((p) => p.n_atoms));
  const allY = groups.flatMap((g) => g.points.map((p) => p.n_max));
  const [nLo, nHi] = extentOf(allN);
  const xTicks: number[] = [];
  for (let v = Math.floor(nLo); v <= Math.ceil(nHi); v++) xTicks.push(v);

  const xDomain: [number, number] = [xTicks[0]! - 0.5, xTicks[xTicks.length - 1]! + 0.5];
  const yDomain: [number, number] = [0, Math.max(...allY) * 1.15];
  const { sx, sy } = scales(xDomain, yDomain);

  const marks = el("g", { class: "groups" });
  groups.forEach((g, gi) => {
    const color = PALETTE[gi % PALETTE.length]!;
    const gEl = el("g", { class: `group group-${gi}`, fill: color });
    for (const p of g.points) {
      gEl.children.push(
        el("circle", {
          class: "point",
          cx: sx(p.n_atoms).toFixed(2),
          cy: sy(p.n_max).toFixed(2),
          r: 5,
          stroke: "#fff",
          "stroke-width": 1,
        }),
      );
    }
    marks.children.push(gEl);
  });

  const entries = groups.map((g, gi) => ({
    text: g.label,
    color: PALETTE[gi % PALETTE.length]!,
  }));

  return document(
    WIDTH,
    HEIGHT,
    frame(sx, sy, {
      width: WIDTH,
      height: HEIGHT,
      margin: MARGIN,
      xLabel: "N (atoms)",
      yLabel: "n_max",
      xTicks,
      yTicks: ticks([0, yDomain[1]]),
    }),
    marks,
    legend(entries, MARGIN.left + 16, MARGIN.top + 16),
  );
}
