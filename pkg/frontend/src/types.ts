/** Wire types for the session service. Field names mirror the JSON exactly. */

export interface ConsistencyReport {
  lambda_max: number;
  ci: number;
  ri: number;
  cr: number;
  consistent: boolean;
  n: number;
  threshold: number;
}

export interface NodeAnalysis {
  local_weights: Record<string, number>;
  consistency: ConsistencyReport;
}

export interface Diagnostic {
  code: string;
  message: string;
  node_id: string | null;
  severity: string;
}

export interface SessionAnalysis {
  unjudged_nodes: string[];
  unrated_alternatives: string[];
  diagnostics: Diagnostic[];
  nodes: Record<string, NodeAnalysis>;
}

export interface JudgmentEntry {
  row: number;
  col: number;
  value: number | string;
}

export interface MatrixRecord {
  rows?: number[][];
  judgments?: Array<[number, number, number | string] | JudgmentEntry>;
}

export interface NodeRecord {
  id: string;
  name?: string;
  children?: NodeRecord[];
  matrix?: MatrixRecord | null;
}

export interface AlternativeRecord {
  id: string;
  name?: string;
}

export interface ModelPayload {
  schema_version: string;
  goal: string;
  scale: string;
  threshold: number;
  criteria_matrix?: MatrixRecord;
  criteria: NodeRecord[];
  alternatives: AlternativeRecord[];
  sheets: Record<string, Record<string, number>>;
  reference?: unknown;
}

export interface SessionEnvelope {
  id: string;
  revision: number;
  created: string;
  modified: string;
  model: ModelPayload;
  analysis: SessionAnalysis;
}

export interface JudgmentsResponse {
  revision: number;
  node_id: string;
  local_weights: Record<string, number>;
  consistency: ConsistencyReport;
}

export interface RatingsResponse {
  revision: number;
  sheets_accepted: string[];
  unrated_alternatives: string[];
}

export interface OrderingRow {
  alternative_id: string;
  total: number;
}

export interface ScoreBreakdown {
  alternative_id: string;
  contributions: Record<string, number>;
  subtotals: Record<string, number>;
  total: number;
}

export interface RankingPayload {
  ordering: OrderingRow[];
  ordering_rule: string;
  breakdowns: Record<string, ScoreBreakdown>;
}

export interface PrioritizationRow {
  leaf: string;
  global_weight: number;
}

export interface WeightsPayload {
  local: Record<string, number>;
  global: Record<string, number>;
  leaf_order: string[];
  top_ancestor: Record<string, string>;
  consistency: Record<string, ConsistencyReport>;
  inconsistent: string[];
  prioritization: PrioritizationRow[];
}

export interface ResultPayload {
  revision: number;
  weights: WeightsPayload;
  ranking: RankingPayload | null;
  subtotals: Record<string, Record<string, number>> | null;
}

export interface WhatifResponse {
  revision: number;
  ranking: RankingPayload;
  subtotals: Record<string, Record<string, number>>;
}

export interface HealthPayload {
  status: string;
  service: string;
  version: string;
}

/** Nested override map: alternative id -> leaf id -> rating. */
export type Overrides = Record<string, Record<string, number>>;

export type JudgmentTriple = [number, number, number | string];
