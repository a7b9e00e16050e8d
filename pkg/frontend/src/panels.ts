/**
 * DOM rendering for the two panels.  Numbers land here straight from
 * server responses; this file only lays them out.
 */

import {
  DEFAULT_LAYOUT,
  column,
  extent,
  linearScale,
  nearestIndex,
  niceTicks,
  pathFor,
} from "./chart.js";
import type {
  CapacityResult,
  CompareResult,
  FigureTable,
  SampleSizeResult,
} from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SERIES_COLORS = ["#0b5fa5", "#c44e52", "#55a868", "#8172b2", "#937860"];

function svgElement(tag: string, attrs: Record<string, string>): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

export interface SeriesSpec {
  label: string;
  ys: number[];
  emphasized?: boolean;
}

/**
 * Render a line chart into `host`.  The emphasized series (the single-label
 * curve) draws thicker and on top; moving the pointer updates a readout
 * with the exact server values at the nearest x.
 */
export function renderLineChart(
  host: HTMLElement,
  xs: number[],
  series: SeriesSpec[],
  options: { xLabel: string; yLabel: string; yFormat?: (v: number) => string },
): void {
  const layout = DEFAULT_LAYOUT;
  host.textContent = "";
  const svg = svgElement("svg", {
    viewBox: `0 0 ${layout.width} ${layout.height}`,
    class: "chart",
  }) as SVGSVGElement;

  const xScale = linearScale(extent(xs), [
    layout.left,
    layout.width - layout.right,
  ]);
  const allY = series.flatMap((s) => s.ys);
  const yScale = linearScale(extent(allY), [
    layout.height - layout.bottom,
    layout.top,
  ]);
  const yFormat = options.yFormat ?? ((v: number) => v.toPrecision(4));

  for (const tick of niceTicks(yScale.domain[0], yScale.domain[1])) {
    const y = yScale(tick);
    svg.appendChild(
      svgElement("line", {
        x1: String(layout.left),
        x2: String(layout.width - layout.right),
        y1: String(y),
        y2: String(y),
        class: "gridline",
      }),
    );
    const label = svgElement("text", {
      x: String(layout.left - 6),
      y: String(y + 3),
      class: "tick-label",
      "text-anchor": "end",
    });
    label.textContent = yFormat(tick);
    svg.appendChild(label);
  }
  for (const tick of niceTicks(xScale.domain[0], xScale.domain[1], 6)) {
    const x = xScale(tick);
    const label = svgElement("text", {
      x: String(x),
      y: String(layout.height - layout.bottom + 16),
      class: "tick-label",
      "text-anchor": "middle",
    });
    label.textContent = String(Number(tick.toPrecision(6)));
    svg.appendChild(label);
  }

  const ordered = [...series].sort(
    (a, b) => Number(a.emphasized ?? false) - Number(b.emphasized ?? false),
  );
  for (const spec of ordered) {
    const index = series.indexOf(spec);
    svg.appendChild(
      svgElement("path", {
        d: pathFor(xs, spec.ys, xScale, yScale),
        class: spec.emphasized ? "series emphasized" : "series",
        stroke: SERIES_COLORS[index % SERIES_COLORS.length] ?? "#333",
        fill: "none",
      }),
    );
  }

  const axisX = svgElement("text", {
    x: String((layout.left + layout.width - layout.right) / 2),
    y: String(layout.height - 4),
    class: "axis-label",
    "text-anchor": "middle",
  });
  axisX.textContent = options.xLabel;
  svg.appendChild(axisX);

  const legend = document.createElement("div");
  legend.className = "legend";
  series.forEach((spec, index) => {
    const item = document.createElement("span");
    item.className = spec.emphasized ? "legend-item emphasized" : "legend-item";
    item.style.setProperty(
      "--series-color",
      SERIES_COLORS[index % SERIES_COLORS.length] ?? "#333",
    );
    item.textContent = spec.label;
    legend.appendChild(item);
  });

  const readout = document.createElement("div");
  readout.className = "readout";
  readout.textContent = `${options.yLabel} — hover for exact values`;
  svg.addEventListener("mousemove", (event) => {
    const rect = svg.getBoundingClientRect();
    const frac = (event.clientX - rect.left) / rect.width;
    const probe =
      xScale.domain[0] + frac * (xScale.domain[1] - xScale.domain[0]);
    const i = nearestIndex(xs, probe);
    const parts = series.map((s) => `${s.label}: ${yFormat(s.ys[i] ?? NaN)}`);
    readout.textContent = `${options.xLabel} = ${xs[i]} · ${parts.join(" · ")}`;
  });

  host.appendChild(svg);
  host.appendChild(legend);
  host.appendChild(readout);
}

/** Success-probability curves; the m=1 series is always emphasized. */
export function renderComparisonChart(
  host: HTMLElement,
  table: FigureTable,
  xName: "q" | "k",
): void {
  const xs = column(table.columns, table.rows, xName);
  const series: SeriesSpec[] = table.columns
    .filter((name) => name.startsWith("p_success_m"))
    .map((name) => ({
      label: name.replace("p_success_m", "m = "),
      ys: column(table.columns, table.rows, name),
      emphasized: name === "p_success_m1",
    }));
  renderLineChart(host, xs, series, {
    xLabel: xName === "q" ? "label accuracy q" : "label budget k",
    yLabel: "probability of identifying the better classifier",
  });
}

/** Compare-strategy table used in correlated mode (no q/k curves there). */
export function renderCompareTable(
  host: HTMLElement,
  result: CompareResult,
): void {
  host.textContent = "";
  const table = document.createElement("table");
  table.className = "compare-table";
  const head = document.createElement("tr");
  for (const title of [
    "m",
    "points n",
    "P(success) single",
    "P(success) m labels",
    "winner",
  ]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const report of result.reports) {
    const row = document.createElement("tr");
    const cells = [
      String(report.plan_agg.m),
      String(report.plan_agg.n),
      report.p_success_single.toPrecision(6),
      report.p_success_agg.toPrecision(6),
      report.winner,
    ];
    cells.forEach((text, i) => {
      const td = document.createElement("td");
      td.textContent = text;
      if (i === 4) {
        td.className = `winner-${report.winner}`;
      }
      row.appendChild(td);
    });
    table.appendChild(row);
  }
  host.appendChild(table);
}

/** Headline + dual-series chart for the capacity panel. */
export function renderCapacityPanel(
  headlineHost: HTMLElement,
  chartHost: HTMLElement,
  capacity: CapacityResult,
  sampleSize: SampleSizeResult,
  table: FigureTable,
): void {
  headlineHost.textContent = "";
  const headline = document.createElement("div");
  headline.className = "headline";
  const modelCount =
    sampleSize.n_cramer != null && capacity.n < sampleSize.n_cramer
      ? 1
      : capacity.models_cramer;
  headline.innerHTML = `<strong>${modelCount}</strong> model${
    modelCount === 1 ? "" : "s"
  } rankable at n = ${capacity.n}, δ = ${capacity.delta}`;
  const detail = document.createElement("div");
  detail.className = "headline-detail";
  const minN =
    sampleSize.n_cramer != null
      ? `minimum n for one comparison: ${sampleSize.n_cramer}`
      : "minimum n unavailable for this configuration";
  detail.textContent =
    `exponential-rate bound: ${capacity.max_comparisons_cramer} comparisons · ` +
    `mean-squared bound: ${capacity.max_comparisons_hoeffding} comparisons · ${minN}`;
  headlineHost.appendChild(headline);
  headlineHost.appendChild(detail);

  const xs = column(table.columns, table.rows, "n");
  renderLineChart(
    chartHost,
    xs,
    [
      {
        label: "models (exponential rate)",
        ys: column(table.columns, table.rows, "models_cramer"),
        emphasized: true,
      },
      {
        label: "models (mean-squared rate)",
        ys: column(table.columns, table.rows, "models_hoeffding"),
      },
    ],
    {
      xLabel: "test-set size n",
      yLabel: "rankable models",
      yFormat: (v) => String(Math.round(v)),
    },
  );
}

export function showError(host: HTMLElement, message: string): void {
  host.textContent = "";
  const box = document.createElement("div");
  box.className = "error-box";
  box.textContent = message;
  host.appendChild(box);
}
