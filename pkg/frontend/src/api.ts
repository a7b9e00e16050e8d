/**
 * Typed client for the calculation service.  Every number shown anywhere in
 * the UI is a field of one of these responses; the client performs no
 * probability math of its own.
 */

import type { ScenarioState } from "./state.js";
import type {
  ApiResponse,
  CapacityResult,
  CompareResult,
  DistResult,
  Envelope,
  FigureTable,
  SampleSizeResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

function paramsOf(s: ScenarioState): Record<string, number> {
  if (s.mode === "independent") {
    return { p: s.p, epsilon: s.epsilon, q: s.q };
  }
  return { p_w: s.p_w, p_b0: s.p_b0, p_b1: s.p_b1, q_b: s.q_b, q_w: s.q_w };
}

export function distEnvelope(s: ScenarioState): Envelope {
  return { mode: s.mode, params: paramsOf(s), plan: {}, options: {} };
}

export function compareEnvelope(s: ScenarioState): Envelope {
  return {
    mode: s.mode,
    params: paramsOf(s),
    plan: { k: s.k },
    options: { m_list: s.mList.filter((m) => m > 1) },
  };
}

export function capacityEnvelope(s: ScenarioState): Envelope {
  return {
    mode: s.mode,
    params: paramsOf(s),
    plan: { n: s.n },
    options: { delta: s.delta },
  };
}

export function sampleSizeEnvelope(s: ScenarioState): Envelope {
  return {
    mode: s.mode,
    params: paramsOf(s),
    plan: {},
    options: { delta: s.delta, comparisons: 1, bound: "cramer" },
  };
}

/** Success-vs-q curves at the scenario's budget (independent mode only). */
export function figdataQEnvelope(s: ScenarioState): Envelope {
  return {
    mode: "independent",
    params: {},
    plan: {},
    options: {
      figure: "fig2a",
      ranges: { p: s.p, epsilon: s.epsilon, k: s.k, m_list: s.mList },
    },
  };
}

/** Success-vs-budget curves at the scenario's label accuracy. */
export function figdataKEnvelope(s: ScenarioState): Envelope {
  const kMax = Math.max(s.k, 300);
  const step = Math.max(1, Math.round(kMax / 30));
  const kValues: number[] = [];
  for (let k = step; k <= kMax; k += step) {
    kValues.push(k);
  }
  if (kValues[kValues.length - 1] !== kMax) {
    kValues.push(kMax);
  }
  return {
    mode: "independent",
    params: {},
    plan: {},
    options: {
      figure: "fig2b",
      ranges: { p: s.p, epsilon: s.epsilon, q: s.q, m_list: s.mList, k_values: kValues },
    },
  };
}

/** Testable-models-vs-n curves at the scenario's tolerance. */
export function figdataCapacityEnvelope(s: ScenarioState): Envelope {
  return {
    mode: "independent",
    params: {},
    plan: {},
    options: {
      figure: "fig1",
      ranges: {
        p: s.p,
        epsilon: s.epsilon,
        q: s.q,
        delta: s.delta,
        n_max: s.n,
        n_step: Math.max(1, Math.round(s.n / 60)),
      },
    },
  };
}

export async function postJson<T>(
  base: string,
  endpoint: string,
  envelope: Envelope,
): Promise<ApiResponse<T>> {
  const response = await fetch(`${base}/api/${endpoint}`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(envelope),
  });
  const body = await response.json();
  if (!response.ok) {
    const detail =
      typeof body?.error === "string" ? body.error : JSON.stringify(body?.error);
    throw new ApiError(response.status, detail ?? `HTTP ${response.status}`);
  }
  return body as ApiResponse<T>;
}

export const api = {
  dist: (base: string, s: ScenarioState) =>
    postJson<DistResult>(base, "dist", distEnvelope(s)),
  compare: (base: string, s: ScenarioState) =>
    postJson<CompareResult>(base, "compare", compareEnvelope(s)),
  capacity: (base: string, s: ScenarioState) =>
    postJson<CapacityResult>(base, "capacity", capacityEnvelope(s)),
  sampleSize: (base: string, s: ScenarioState) =>
    postJson<SampleSizeResult>(base, "samplesize", sampleSizeEnvelope(s)),
  successVsQ: (base: string, s: ScenarioState) =>
    postJson<FigureTable>(base, "figdata", figdataQEnvelope(s)),
  successVsK: (base: string, s: ScenarioState) =>
    postJson<FigureTable>(base, "figdata", figdataKEnvelope(s)),
  capacityVsN: (base: string, s: ScenarioState) =>
    postJson<FigureTable>(base, "figdata", figdataCapacityEnvelope(s)),
};
