/** Bootstrap: URL state, form wiring, request scheduling, panel refresh. */

import { api, ApiError } from "./api.js";
import {
  renderCapacityPanel,
  renderComparisonChart,
  renderCompareTable,
  showError,
} from "./panels.js";
import { debounce, VersionGate } from "./scheduler.js";
import {
  decodeScenario,
  encodeScenario,
  validateScenario,
  type ScenarioState,
} from "./state.js";

const BASE = "";

let state: ScenarioState = decodeScenario(window.location.search);
const gate = new VersionGate();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const FIELD_IDS: (keyof ScenarioState)[] = [
  "p",
  "epsilon",
  "q",
  "p_w",
  "p_b0",
  "p_b1",
  "q_b",
  "q_w",
  "k",
  "delta",
  "n",
];

function syncFormFromState(): void {
  (el<HTMLSelectElement>("mode")).value = state.mode;
  for (const key of FIELD_IDS) {
    el<HTMLInputElement>(key).value = String(state[key]);
  }
  el<HTMLInputElement>("mList").value = state.mList.join(",");
  document.body.dataset.mode = state.mode;
}

function readFormIntoState(): void {
  const mode = (el<HTMLSelectElement>("mode")).value;
  state.mode = mode === "correlated" ? "correlated" : "independent";
  for (const key of FIELD_IDS) {
    const raw = el<HTMLInputElement>(key).value;
    (state as unknown as Record<string, number>)[key] = Number(raw);
  }
  state.mList = el<HTMLInputElement>("mList")
    .value.split(",")
    .map((v) => Number(v.trim()))
    .filter((v) => Number.isFinite(v));
  document.body.dataset.mode = state.mode;
}

function flagErrors(): boolean {
  const errors = validateScenario(state);
  for (const key of [...FIELD_IDS, "mList"] as (keyof ScenarioState)[]) {
    const input = el<HTMLInputElement>(key as string);
    const message = errors[key];
    input.classList.toggle("invalid", message !== undefined);
    input.title = message ?? "";
  }
  const banner = el("validation-banner");
  const messages = Object.entries(errors).map(([k, v]) => `${k}: ${v}`);
  banner.textContent = messages.join(" · ");
  banner.hidden = messages.length === 0;
  return messages.length === 0;
}

function pushUrl(): void {
  const query = encodeScenario(state);
  window.history.replaceState({}, "", `${window.location.pathname}?${query}`);
}

async function refresh(): Promise<void> {
  readFormIntoState();
  pushUrl();
  if (!flagErrors()) {
    return;
  }
  const version = gate.next();
  const warning = el("assumption-banner");
  warning.hidden = true;

  const comparisonQ = el("comparison-q");
  const comparisonK = el("comparison-k");
  const capacityHeadline = el("capacity-headline");
  const capacityChart = el("capacity-chart");

  try {
    if (state.mode === "correlated") {
      const [dist, compare] = await Promise.all([
        api.dist(BASE, state),
        api.compare(BASE, state),
      ]);
      if (!gate.isCurrent(version)) {
        return;
      }
      if (dist.result.assumption1_satisfied === false) {
        warning.textContent =
          "Assumption violated: label accuracy favors the worse classifier " +
          "(q_b < q_w); the gap mean can be negative and aggregation can win.";
        warning.hidden = false;
      }
      renderCompareTable(comparisonQ, compare.result);
      comparisonK.textContent =
        "Accuracy curves are available in independent mode.";
    } else {
      const [vsQ, vsK] = await Promise.all([
        api.successVsQ(BASE, state),
        api.successVsK(BASE, state),
      ]);
      if (!gate.isCurrent(version)) {
        return;
      }
      renderComparisonChart(comparisonQ, vsQ.result, "q");
      renderComparisonChart(comparisonK, vsK.result, "k");
    }
  } catch (error) {
    if (gate.isCurrent(version)) {
      const message =
        error instanceof ApiError
          ? `server: ${error.message}`
          : String(error);
      showError(comparisonQ, message);
      showError(comparisonK, message);
    }
  }

  try {
    const [capacity, sampleSize, table] = await Promise.all([
      api.capacity(BASE, state),
      api.sampleSize(BASE, state),
      api.capacityVsN(BASE, state),
    ]);
    if (!gate.isCurrent(version)) {
      return;
    }
    renderCapacityPanel(
      capacityHeadline,
      capacityChart,
      capacity.result,
      sampleSize.result,
      table.result,
    );
  } catch (error) {
    if (gate.isCurrent(version)) {
      const message =
        error instanceof ApiError ? `server: ${error.message}` : String(error);
      showError(capacityHeadline, message);
      capacityChart.textContent = "";
    }
  }
}

const scheduleRefresh = debounce(() => {
  void refresh();
});

function wire(): void {
  syncFormFromState();
  for (const key of [...FIELD_IDS, "mList", "mode"]) {
    el(key as string).addEventListener("input", scheduleRefresh);
  }
  el("refresh").addEventListener("click", () => void refresh());
  void refresh();
}

wire();
