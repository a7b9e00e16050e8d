/** Wire types mirroring the server's request envelope and responses. */

export type Mode = "independent" | "correlated";

export interface Envelope {
  mode: Mode;
  params: Record<string, number>;
  plan: { k?: number; m?: number; n?: number };
  options: Record<string, unknown>;
}

export interface ApiResponse<T> {
  version: string;
  input: Envelope;
  result: T;
}

export interface FigureTable {
  figure: string;
  columns: string[];
  rows: number[][];
}

export interface DistResult {
  x: number;
  y: number;
  z: number;
  expectation: number;
  assumption1_satisfied?: boolean;
}

export interface CapacityResult {
  delta: number;
  n: number;
  max_comparisons_hoeffding: number;
  max_comparisons_cramer: number;
  models_hoeffding: number;
  models_cramer: number;
}

export interface SampleSizeResult {
  comparisons: number;
  delta: number;
  n_cramer?: number | null;
  n_hoeffding?: number | null;
}

export interface PlanInfo {
  k: number;
  m: number;
  n: number;
}

export interface CompareReport {
  plan_single: PlanInfo;
  plan_agg: PlanInfo;
  p_success_single: number;
  p_success_agg: number;
  winner: "single" | "aggregate" | "tie";
}

export interface CompareResult {
  reports: CompareReport[];
}
