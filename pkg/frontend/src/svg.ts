/**
 * Minimal SVG assembly: an element tree with attribute escaping, linear
 * scales, and tick generation. Nothing here knows about the physics —
 * plots.ts builds figures out of these parts.
 */

export interface SvgNode {
  tag: string;
  attrs: Record<string, string | number>;
  children: (SvgNode | string)[];
}

export function el(
  tag: string,
  attrs: Record<string, string | number> = {},
  ...children: (SvgNode | string)[]
): SvgNode {
  return { tag, attrs, children };
}

function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function escapeAttr(s: string): string {
  return escapeText(s).replace(/"/g, "&quot;");
}

export function render(node: SvgNode, indent = 0): string {
  const pad = "  ".repeat(indent);
  const attrs = Object.entries(node.attrs)
    .map(([k, v]) => ` ${k}="${escapeAttr(String(v))}"`)
    .join("");
  if (node.children.length === 0) {
    return `${pad}<${node.tag}${attrs}/>`;
  }
  const inner = node.children
    .map((c) => (typeof c === "string" ? pad + "  " + escapeText(c) : render(c, indent + 1)))
    .join("\n");
  return `${pad}<${node.tag}${attrs}>\n${inner}\n${pad}</${node.tag}>`;
}

/** Affine map from a data interval onto pixel coordinates. */
export interface Scale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((x: number) => r0 + ((x - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

/** Round tick positions covering the domain, at most `count` of them. */
export function ticks(domain: [number, number], count = 6): number[] {
  const [lo, hi] = domain;
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const mult of [1, 2, 2.5, 5, 10]) {
    if (mag * mult >= rawStep) {
      step = mag * mult;
      break;
    }
  }
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    out.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return out;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

/** Pad a [min, max] data extent so curves keep clear of the frame. */
export function padded(extent: [number, number], frac = 0.06): [number, number] {
  const [lo, hi] = extent;
  const pad = (hi - lo || Math.abs(lo) || 1) * frac;
  return [lo - pad, hi + pad];
}

export function extentOf(values: number[]): [number, number] {
  let lo = Number.POSITIVE_INFINITY;
  let hi = Number.NEGATIVE_INFINITY;
  for (const v of values) {
    if (Number.isNaN(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) throw new Error("extent of no finite values");
  return [lo, hi];
}

export function polylinePoints(xs: number[], ys: number[], sx: Scale, sy: Scale): string {
  const pts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    const x = xs[i]!;
    const y = ys[i]!;
    if (Number.isNaN(x) || Number.isNaN(y)) continue;
    pts.push(`${sx(x).toFixed(2)},${sy(y).toFixed(2)}`);
  }
  return pts.join(" ");
}

export interface FrameOptions {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
  xLabel: string;
  yLabel: string;
  xTicks?: number[];
  yTicks?: number[];
}

/**
 * Axes, tick marks, tick labels, and axis labels for the given scales.
 * Returns a <g> the caller appends plot marks after (so marks draw on top).
 */
export function frame(sx: Scale, sy: Scale, opts: FrameOptions): SvgNode {
  const [x0, x1] = sx.range;
  const [yBottom, yTop] = sy.range;
  const g = el("g", { class: "frame", stroke: "#333", "font-size": 12 });

  g.children.push(
    el("line", { x1: x0, y1: yBottom, x2: x1, y2: yBottom }),
    el("line", { x1: x0, y1: yBottom, x2: x0, y2: yTop }),
  );
  for (const t of opts.xTicks ?? ticks(sx.domain)) {
    const px = sx(t);
    g.children.push(
      el("line", { x1: px, y1: yBottom, x2: px, y2: yBottom + 5 }),
      el(
        "text",
        { x: px, y: yBottom + 18, "text-anchor": "middle", stroke: "none", fill: "#333" },
        formatTick(t),
      ),
    );
  }
  for (const t of opts.yTicks ?? ticks(sy.domain)) {
    const py = sy(t);
    g.children.push(
      el("line", { x1: x0 - 5, y1: py, x2: x0, y2: py }),
      el(
        "text",
        { x: x0 - 8, y: py + 4, "text-anchor": "end", stroke: "none", fill: "#333" },
        formatTick(t),
      ),
    );
  }
  g.children.push(
    el(
      "text",
      {
        class: "x-label",
        x: (x0 + x1) / 2,
        y: yBottom + 36,
        "text-anchor": "middle",
        stroke: "none",
        fill: "#000",
      },
      opts.xLabel,
    ),
    el(
      "text",
      {
        class: "y-label",
        x: 0,
        y: 0,
        transform: `translate(${x0 - 42},${(yBottom + yTop) / 2}) rotate(-90)`,
        "text-anchor": "middle",
        stroke: "none",
        fill: "#000",
      },
      opts.yLabel,
    ),
  );
  return g;
}

export function document(width: number, height: number, ...children: SvgNode[]): string {
  const root = el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      viewBox: `0 0 ${width} ${height}`,
      width,
      height,
      "font-family": "sans-serif",
    },
    el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
    ...children,
  );
  return render(root) + "\n";
}
