/** View-model helpers: flatten the service's model tree into something the
 * renderer can iterate, and prepare wizard pair lists. No weighing happens
 * here; every number shown on screen arrives from the service. */

import { decodeJudgment, type PairValue } from "./format.js";
import type {
  MatrixRecord,
  NodeAnalysis,
  NodeRecord,
  SessionEnvelope,
} from "./types.js";

export const ROOT_ID = "goal";

export interface NodeView {
  id: string;
  name: string;
  depth: number;
  childIds: string[];
  childNames: string[];
  /** true when the node has 2+ children and therefore needs judgments */
  judgeable: boolean;
  hasMatrix: boolean;
  matrix: MatrixRecord | null;
  analysis: NodeAnalysis | null;
}

export interface SessionView {
  id: string;
  revision: number;
  goal: string;
  nodes: NodeView[];
  byId: Map<string, NodeView>;
  leafIds: string[];
  leafNames: Map<string, string>;
  alternatives: Array<{ id: string; name: string }>;
  sheets: Record<string, Record<string, number>>;
  unjudgedNodes: string[];
  unratedAlternatives: string[];
}

function walk(
  record: NodeRecord,
  depth: number,
  analysis: Record<string, NodeAnalysis>,
  out: NodeView[],
  leaves: string[],
  leafNames: Map<string, string>,
): void {
  const children = record.children ?? [];
  const view: NodeView = {
    id: record.id,
    name: record.name ?? record.id,
    depth,
    childIds: children.map((c) => c.id),
    childNames: children.map((c) => c.name ?? c.id),
    judgeable: children.length >= 2,
    hasMatrix: record.matrix != null,
    matrix: record.matrix ?? null,
    analysis: analysis[record.id] ?? null,
  };
  out.push(view);
  if (children.length === 0) {
    leaves.push(record.id);
    leafNames.set(record.id, view.name);
  }
  for (const child of children) {
    walk(child, depth + 1, analysis, out, leaves, leafNames);
  }
}

export function sessionView(envelope: SessionEnvelope): SessionView {
  const model = envelope.model;
  const root: NodeRecord = {
    id: ROOT_ID,
    name: model.goal ?? ROOT_ID,
    children: model.criteria ?? [],
    matrix: model.criteria_matrix ?? undefined,
  };
  const nodes: NodeView[] = [];
  const leafIds: string[] = [];
  const leafNames = new Map<string, string>();
  walk(root, 0, envelope.analysis.nodes, nodes, leafIds, leafNames);
  const byId = new Map(nodes.map((n) => [n.id, n]));
  return {
    id: envelope.id,
    revision: envelope.revision,
    goal: model.goal ?? ROOT_ID,
    nodes,
    byId,
    leafIds,
    leafNames,
    alternatives: (model.alternatives ?? []).map((a) => ({
      id: a.id,
      name: a.name ?? a.id,
    })),
    sheets: model.sheets ?? {},
    unjudgedNodes: envelope.analysis.unjudged_nodes,
    unratedAlternatives: envelope.analysis.unrated_alternatives,
  };
}

export interface WizardPair {
  i: number;
  j: number;
  leftId: string;
  leftName: string;
  rightId: string;
  rightName: string;
}

/** Every unordered pair of the node's children, in row-major order, so the
 * wizard covers the full upper triangle exactly once. */
export function wizardPairs(node: NodeView): WizardPair[] {
  const pairs: WizardPair[] = [];
  const n = node.childIds.length;
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      pairs.push({
        i,
        j,
        leftId: node.childIds[i],
        leftName: node.childNames[i],
        rightId: node.childIds[j],
        rightName: node.childNames[j],
      });
    }
  }
  return pairs;
}

export function pairKey(i: number, j: number): string {
  return `${i}:${j}`;
}

/** Read an existing matrix back into wizard control values so re-judging a
 * node starts from the current answers instead of a blank slate. */
export function prefillPairs(matrix: MatrixRecord | null): Map<string, PairValue> {
  const values = new Map<string, PairValue>();
  if (!matrix) return values;
  if (matrix.rows) {
    for (let i = 0; i < matrix.rows.length; i++) {
      for (let j = i + 1; j < matrix.rows.length; j++) {
        const decoded = decodeJudgment(matrix.rows[i][j]);
        if (decoded) values.set(pairKey(i, j), decoded);
      }
    }
    return values;
  }
  for (const entry of matrix.judgments ?? []) {
    let row: number;
    let col: number;
    let value: number | string;
    if (Array.isArray(entry)) {
      [row, col, value] = entry;
    } else {
      row = entry.row;
      col = entry.col;
      value = entry.value;
    }
    let decoded = decodeJudgment(value);
    if (!decoded) continue;
    if (row > col) {
      [row, col] = [col, row];
      decoded = {
        direction: decoded.direction === "row" ? "col" : "row",
        intensity: decoded.intensity,
      };
    }
    values.set(pairKey(row, col), decoded);
  }
  return values;
}
