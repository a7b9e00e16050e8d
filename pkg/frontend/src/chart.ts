/**
 * SVG line-chart geometry as pure functions: scales, path strings, ticks,
 * nearest-point lookup for hover readouts.  No DOM access here, so all of
 * it is unit-testable; panels.ts turns the strings into elements.
 */

export interface Layout {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const DEFAULT_LAYOUT: Layout = {
  width: 560,
  height: 300,
  left: 58,
  right: 14,
  top: 12,
  bottom: 34,
};

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const fn = ((value: number) =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

/** Extent of finite values, padded so flat series stay visible. */
export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (lo === Infinity) {
    return [0, 1];
  }
  if (lo === hi) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.05 : 0.5;
    return [lo - pad, hi + pad];
  }
  return [lo, hi];
}

/** Round tick positions covering [lo, hi] at a power-of-ten-ish step. */
export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const rawStep = (hi - lo) / Math.max(1, count);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = power;
  for (const mult of [1, 2, 2.5, 5, 10]) {
    if (power * mult >= rawStep) {
      step = power * mult;
      break;
    }
  }
  // Snap each tick to the step's decimal precision so grid labels read as
  // round numbers (6 * 0.1 multiplies out to 0.6000000000000001 otherwise).
  const decimals = Math.max(0, -Math.floor(Math.log10(step)) + 1);
  const ticks: number[] = [];
  for (let i = Math.ceil(lo / step - 1e-9); i * step <= hi + step * 1e-9; i++) {
    ticks.push(i === 0 ? 0 : Number((i * step).toFixed(decimals)));
  }
  return ticks;
}

/** "M x0 y0 L x1 y1 ..." for the finite points of a series. */
export function pathFor(
  xs: number[],
  ys: number[],
  xScale: Scale,
  yScale: Scale,
): string {
  const parts: string[] = [];
  let pen = false;
  for (let i = 0; i < xs.length; i++) {
    const x = xs[i];
    const y = ys[i];
    if (x === undefined || y === undefined || !Number.isFinite(y)) {
      pen = false;
      continue;
    }
    const sx = xScale(x).toFixed(2);
    const sy = yScale(y).toFixed(2);
    parts.push(`${pen ? "L" : "M"}${sx} ${sy}`);
    pen = true;
  }
  return parts.join(" ");
}

/** Index of the x closest to the probe value (for hover readouts). */
export function nearestIndex(xs: number[], probe: number): number {
  let best = 0;
  let bestGap = Infinity;
  for (let i = 0; i < xs.length; i++) {
    const x = xs[i];
    if (x === undefined) {
      continue;
    }
    const gap = Math.abs(x - probe);
    if (gap < bestGap) {
      bestGap = gap;
      best = i;
    }
  }
  return best;
}

/** Column of a figure table, by name. */
export function column(
  columns: string[],
  rows: number[][],
  name: string,
): number[] {
  const index = columns.indexOf(name);
  if (index < 0) {
    throw new Error(`no column ${name} in ${columns.join(",")}`);
  }
  return rows.map((row) => {
    const v = row[index];
    return v === undefined || v === null ? NaN : v;
  });
}
