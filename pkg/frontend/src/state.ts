/**
 * Scenario state: every input the calculator panels depend on, its
 * validation mirror of the server-side ranges, and loss-free URL
 * round-tripping so any view is deep-linkable.
 */

import type { Mode } from "./types.js";

export interface ScenarioState {
  mode: Mode;
  /* independent parameters */
  p: number;
  epsilon: number;
  q: number;
  /* correlated parameters */
  p_w: number;
  p_b0: number;
  p_b1: number;
  q_b: number;
  q_w: number;
  /* budget and planning inputs */
  k: number;
  mList: number[];
  delta: number;
  n: number;
}

/** First paint reproduces the reference comparison scenario. */
export function defaultScenario(): ScenarioState {
  return {
    mode: "independent",
    p: 0.8,
    epsilon: 0.01,
    q: 0.8,
    p_w: 0.8,
    p_b0: 0.81,
    p_b1: 0.81,
    q_b: 0.8,
    q_w: 0.8,
    k: 1500,
    mList: [1, 3, 5],
    delta: 0.05,
    n: 1500,
  };
}

export type FieldErrors = Partial<Record<keyof ScenarioState, string>>;

/**
 * Mirror of the server's parameter ranges; invalid fields block submission
 * so the server never sees a request that is known-bad client-side.
 */
export function validateScenario(s: ScenarioState): FieldErrors {
  const errors: FieldErrors = {};
  const inRange = (
    field: keyof ScenarioState,
    value: number,
    lo: number,
    hi: number,
    loOpen: boolean,
    hiOpen: boolean,
  ) => {
    const badLo = loOpen ? value <= lo : value < lo;
    const badHi = hiOpen ? value >= hi : value > hi;
    if (!Number.isFinite(value) || badLo || badHi) {
      const l = loOpen ? "(" : "[";
      const r = hiOpen ? ")" : "]";
      errors[field] = `must be in ${l}${lo}, ${hi}${r}`;
    }
  };

  if (s.mode === "independent") {
    inRange("p", s.p, 0.5, 1, false, false);
    inRange("q", s.q, 0.5, 1, true, false);
    if (!Number.isFinite(s.epsilon) || s.epsilon <= 0 || s.p + s.epsilon > 1) {
      errors.epsilon = "must be in (0, 1-p]";
    }
  } else {
    inRange("p_w", s.p_w, 0.5, 1, false, false);
    inRange("p_b0", s.p_b0, 0.5, 1, false, false);
    inRange("p_b1", s.p_b1, 0.5, 1, false, false);
    inRange("q_b", s.q_b, 0.5, 1, true, false);
    inRange("q_w", s.q_w, 0.5, 1, true, false);
    if (!errors.p_w && !errors.p_b0 && !errors.p_b1) {
      if ((1 - s.p_w) * s.p_b0 + s.p_w * s.p_b1 <= s.p_w) {
        errors.p_b0 = "risk ordering: (1-p_w)p_b0 + p_w*p_b1 must exceed p_w";
      }
    }
  }
  inRange("delta", s.delta, 0, 1, true, true);
  if (!Number.isInteger(s.k) || s.k < 1) {
    errors.k = "must be an integer >= 1";
  }
  if (!Number.isInteger(s.n) || s.n < 1) {
    errors.n = "must be an integer >= 1";
  }
  if (
    s.mList.length === 0 ||
    s.mList.some((m) => !Number.isInteger(m) || m < 1 || m % 2 === 0)
  ) {
    errors.mList = "labels per point must be odd integers";
  } else if (Math.max(...s.mList) > s.k) {
    errors.mList = "largest m exceeds the budget k";
  }
  return errors;
}

const NUMBER_KEYS: (keyof ScenarioState)[] = [
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

/** Scenario -> query string ("?" not included). Number.toString round-trips. */
export function encodeScenario(s: ScenarioState): string {
  const params = new URLSearchParams();
  params.set("mode", s.mode);
  for (const key of NUMBER_KEYS) {
    params.set(key, String(s[key]));
  }
  params.set("m_list", s.mList.join(","));
  return params.toString();
}

/** Query string -> scenario; missing or unparsable keys keep defaults. */
export function decodeScenario(query: string): ScenarioState {
  const params = new URLSearchParams(query);
  const state = defaultScenario();
  const mode = params.get("mode");
  if (mode === "independent" || mode === "correlated") {
    state.mode = mode;
  }
  for (const key of NUMBER_KEYS) {
    const raw = params.get(key);
    if (raw !== null && raw !== "" && Number.isFinite(Number(raw))) {
      (state as unknown as Record<string, number>)[key] = Number(raw);
    }
  }
  const rawM = params.get("m_list");
  if (rawM !== null && rawM !== "") {
    const values = rawM
      .split(",")
      .map((v) => v.trim())
      .filter((v) => v !== "")
      .map(Number)
      .filter((v) => Number.isFinite(v));
    if (values.length > 0) {
      state.mList = values;
    }
  }
  return state;
}
