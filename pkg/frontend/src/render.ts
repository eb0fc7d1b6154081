/** HTML renderers. Every function takes data and returns a string; the DOM
 * wiring in main.ts swaps innerHTML and delegates events by data-action.
 * No AHP arithmetic: printed numbers are service fields run through the
 * formatters, and bar widths are layout scaling of those same fields. */

import {
  fmtCr,
  fmtShare,
  fmtTotal,
  fmtWeight,
  intensityLabel,
  ratingLabel,
  type PairValue,
} from "./format.js";
import { pairKey, type NodeView, type SessionView, type WizardPair } from "./state.js";
import type {
  ConsistencyReport,
  JudgmentsResponse,
  RankingPayload,
  ResultPayload,
} from "./types.js";

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function crBadge(consistency: ConsistencyReport | null): string {
  if (!consistency) {
    return `<span class="badge badge-pending">not judged</span>`;
  }
  const cls = consistency.consistent ? "badge-ok" : "badge-bad";
  return `<span class="badge ${cls}">CR ${fmtCr(consistency.cr)}</span>`;
}

// ---------------------------------------------------------------- tree view

export function renderTree(view: SessionView): string {
  const rows = view.nodes
    .map((node) => {
      const badge = node.judgeable ? crBadge(node.analysis?.consistency ?? null) : "";
      const judge = node.judgeable
        ? `<button class="btn btn-small" data-action="judge" data-node="${escapeHtml(node.id)}">` +
          (node.analysis ? "Re-judge" : "Judge") +
          `</button>`
        : "";
      const weightCells = node.analysis
        ? `<div class="tree-weights">${weightBars(node.analysis.local_weights, view)}</div>`
        : "";
      return (
        `<li class="tree-row depth-${node.depth}">` +
        `<span class="tree-name">${escapeHtml(node.name)}</span> ${badge} ${judge}` +
        weightCells +
        `</li>`
      );
    })
    .join("\n");
  return `<ul class="tree">${rows}</ul>`;
}

function weightBars(weights: Record<string, number>, view: SessionView): string {
  return Object.entries(weights)
    .map(([childId, w]) => {
      const name = view.byId.get(childId)?.name ?? childId;
      return (
        `<div class="wrow">` +
        `<span class="wname">${escapeHtml(name)}</span>` +
        `<span class="bar"><span class="fill" style="width:${(100 * w).toFixed(1)}%"></span></span>` +
        `<span class="wval">${fmtWeight(w)}</span>` +
        `</div>`
      );
    })
    .join("");
}

// ------------------------------------------------------------------- wizard

export interface WizardProps {
  node: NodeView;
  pairs: WizardPair[];
  index: number;
  values: Map<string, PairValue>;
  /** inline message from a rejected submission, shown at the control */
  error: string | null;
  /** service response once the full triangle has been submitted */
  result: JudgmentsResponse | null;
  view: SessionView;
}

export function renderWizard(props: WizardProps): string {
  const { node, pairs, index, values, error, result, view } = props;
  if (result) {
    return renderWizardResult(node, result, view);
  }
  const pair = pairs[index];
  const current = values.get(pairKey(pair.i, pair.j)) ?? { direction: "row", intensity: 1 };
  const answered = pairs.filter((p) => values.has(pairKey(p.i, p.j))).length;
  const options = [1, 2, 3, 4, 5, 6, 7, 8, 9]
    .map(
      (v) =>
        `<option value="${v}"${v === current.intensity ? " selected" : ""}>` +
        `${v} - ${escapeHtml(intensityLabel(v))}</option>`,
    )
    .join("");
  const equal = current.intensity === 1;
  const dirRow = current.direction === "row";
  return `
<div class="wizard" data-node="${escapeHtml(node.id)}">
  <h3>Compare under: ${escapeHtml(node.name)}</h3>
  <p class="wizard-progress">Pair ${index + 1} of ${pairs.length} (${answered} answered)</p>
  <div class="pair-control">
    <div class="pair-sides">
      <button class="side${dirRow && !equal ? " active" : ""}" data-action="direction" data-dir="row">
        ${escapeHtml(pair.leftName)}
      </button>
      <span class="vs">vs</span>
      <button class="side${!dirRow && !equal ? " active" : ""}" data-action="direction" data-dir="col">
        ${escapeHtml(pair.rightName)}
      </button>
    </div>
    <p class="pair-hint">${
      equal
        ? "Both matter equally. Pick a side to say one matters more."
        : `Favoring <strong>${escapeHtml(dirRow ? pair.leftName : pair.rightName)}</strong>`
    }</p>
    <label class="intensity">
      How strongly?
      <select data-action="intensity">${options}</select>
    </label>
    ${error ? `<p class="inline-error">${escapeHtml(error)}</p>` : ""}
  </div>
  <div class="wizard-nav">
    <button class="btn" data-action="pair-prev"${index === 0 ? " disabled" : ""}>Back</button>
    ${
      index + 1 < pairs.length
        ? `<button class="btn btn-primary" data-action="pair-next">Next</button>`
        : `<button class="btn btn-primary" data-action="wizard-submit">Save judgments</button>`
    }
    <button class="btn btn-quiet" data-action="wizard-cancel">Cancel</button>
  </div>
</div>`;
}

function renderWizardResult(
  node: NodeView,
  result: JudgmentsResponse,
  view: SessionView,
): string {
  const badge = crBadge(result.consistency);
  const bars = weightBars(result.local_weights, view);
  const redo = result.consistency.consistent
    ? ""
    : `
  <div class="rejudge-note">
    <p>These answers contradict each other more than the cutoff allows
       (CR ${fmtCr(result.consistency.cr)}, needs to stay under
       ${fmtCr(result.consistency.threshold)}). Worth revisiting:</p>
    <ul>${wizardPairList(node)}</ul>
    <button class="btn btn-primary" data-action="judge" data-node="${escapeHtml(node.id)}">
      Revisit answers
    </button>
  </div>`;
  return `
<div class="wizard wizard-done" data-node="${escapeHtml(node.id)}">
  <h3>${escapeHtml(node.name)}: judged</h3>
  <p>${badge}</p>
  <div class="tree-weights">${bars}</div>
  ${redo}
  <button class="btn" data-action="wizard-close">Done</button>
</div>`;
}

function wizardPairList(node: NodeView): string {
  const items: string[] = [];
  for (let i = 0; i < node.childNames.length; i++) {
    for (let j = i + 1; j < node.childNames.length; j++) {
      items.push(
        `<li>${escapeHtml(node.childNames[i])} vs ${escapeHtml(node.childNames[j])}</li>`,
      );
    }
  }
  return items.join("");
}

// ------------------------------------------------------------------ ratings

export function renderRatings(
  view: SessionView,
  draft: Record<string, Record<string, number | null>>,
): string {
  if (view.alternatives.length === 0) {
    return `<p class="empty-note">This model has no alternatives to rate. Weights are still available on the dashboard.</p>`;
  }
  const header = view.alternatives
    .map((a) => `<th>${escapeHtml(a.name)}</th>`)
    .join("");
  const rows = view.leafIds
    .map((leaf) => {
      const cells = view.alternatives
        .map((alt) => {
          const value = draft[alt.id]?.[leaf];
          const shown = value == null ? "" : String(value);
          const tip = value == null ? "not rated" : ratingLabel(value);
          return (
            `<td><input type="number" min="0" max="10" step="1" value="${shown}" ` +
            `title="${escapeHtml(tip)}" data-rating data-alt="${escapeHtml(alt.id)}" ` +
            `data-leaf="${escapeHtml(leaf)}"></td>`
          );
        })
        .join("");
      return `<tr><th class="leaf-name">${escapeHtml(view.leafNames.get(leaf) ?? leaf)}</th>${cells}</tr>`;
    })
    .join("\n");
  const pending = view.unratedAlternatives.length
    ? `<p class="pending-note">Waiting on ratings for: ${view.unratedAlternatives
        .map((a) => escapeHtml(a))
        .join(", ")}</p>`
    : "";
  return `
<div class="ratings">
  <p>Score each alternative on every lowest-level factor, 0 (worst) to 10 (best). Hover a cell for the label.</p>
  <div class="table-scroll">
    <table class="ratings-grid">
      <thead><tr><th></th>${header}</tr></thead>
      <tbody>${rows}</tbody>
    </table>
  </div>
  ${pending}
  <button class="btn btn-primary" data-action="save-ratings">Save ratings</button>
  <span class="save-note" data-ratings-note></span>
</div>`;
}

// ---------------------------------------------------------------- dashboard

const SEGMENT_CLASSES = 6;

function rankingBars(ranking: RankingPayload, view: SessionView, title: string): string {
  const max = ranking.ordering.reduce((m, row) => Math.max(m, row.total), 0) || 1;
  const topCriteria = view.nodes.filter((n) => n.depth === 1).map((n) => n.id);
  const rows = ranking.ordering
    .map((row, rank) => {
      const name = view.alternatives.find((a) => a.id === row.alternative_id)?.name ?? row.alternative_id;
      const breakdown = ranking.breakdowns[row.alternative_id];
      const segments = topCriteria
        .map((critId, idx) => {
          const part = breakdown?.subtotals[critId] ?? 0;
          return (
            `<span class="seg seg-${idx % SEGMENT_CLASSES}" ` +
            `style="width:${((100 * part) / max).toFixed(2)}%" ` +
            `title="${escapeHtml(view.byId.get(critId)?.name ?? critId)}: ${fmtTotal(part)}"></span>`
          );
        })
        .join("");
      return (
        `<div class="rank-row">` +
        `<span class="rank-pos">${rank + 1}</span>` +
        `<span class="rank-name">${escapeHtml(name)}</span>` +
        `<span class="rank-bar">${segments}</span>` +
        `<span class="rank-total">${fmtTotal(row.total)}</span>` +
        `</div>`
      );
    })
    .join("\n");
  const legend = topCriteria
    .map(
      (critId, idx) =>
        `<span class="legend-item"><span class="seg seg-${idx % SEGMENT_CLASSES}"></span>` +
        `${escapeHtml(view.byId.get(critId)?.name ?? critId)}</span>`,
    )
    .join(" ");
  return `
<section class="panel">
  <h3>${escapeHtml(title)}</h3>
  <div class="ranking">${rows}</div>
  <p class="legend">${legend}</p>
</section>`;
}

export function renderDashboard(result: ResultPayload, view: SessionView): string {
  const ranking = result.ranking
    ? rankingBars(result.ranking, view, "Ranking")
    : `<section class="panel"><h3>Ranking</h3><p class="empty-note">No alternatives in this model; see the weight table below.</p></section>`;
  const prioritized = result.weights.prioritization
    .map((row, idx) => {
      const top = result.weights.top_ancestor[row.leaf];
      return (
        `<tr><td>${idx + 1}</td>` +
        `<td>${escapeHtml(view.leafNames.get(row.leaf) ?? row.leaf)}</td>` +
        `<td>${escapeHtml(view.byId.get(top)?.name ?? top ?? "")}</td>` +
        `<td class="num">${fmtWeight(row.global_weight)}</td>` +
        `<td class="num">${fmtShare(row.global_weight)}</td></tr>`
      );
    })
    .join("\n");
  const inconsistent = result.weights.inconsistent.length
    ? `<p class="pending-note">Judgments over the consistency cutoff: ${result.weights.inconsistent
        .map(
          (id) =>
            `<button class="btn btn-small" data-action="judge" data-node="${escapeHtml(id)}">` +
            `${escapeHtml(view.byId.get(id)?.name ?? id)}</button>`,
        )
        .join(" ")} (click to revisit; the ranking still uses them as entered).</p>`
    : "";
  return `
${ranking}
${inconsistent}
<section class="panel">
  <h3>Factors that matter most</h3>
  <div class="table-scroll">
    <table class="prio-table">
      <thead><tr><th>#</th><th>Factor</th><th>Under</th><th class="num">Weight</th><th class="num">Share</th></tr></thead>
      <tbody>${prioritized}</tbody>
    </table>
  </div>
</section>`;
}

export function renderWhatifResult(ranking: RankingPayload, view: SessionView): string {
  return rankingBars(ranking, view, "If you made that change");
}

// --------------------------------------------------------- gaps & conflicts

export function renderGaps(
  unjudgedNodes: string[],
  unratedAlternatives: string[],
  view: SessionView,
): string {
  const judging = unjudgedNodes
    .map((id) => {
      const name = view.byId.get(id)?.name ?? id;
      return (
        `<li>${escapeHtml(name)} ` +
        `<button class="btn btn-small" data-action="judge" data-node="${escapeHtml(id)}">Judge now</button></li>`
      );
    })
    .join("");
  const rating = unratedAlternatives
    .map((id) => {
      const name = view.alternatives.find((a) => a.id === id)?.name ?? id;
      return `<li>${escapeHtml(name)} <button class="btn btn-small" data-action="goto-ratings">Rate now</button></li>`;
    })
    .join("");
  return `
<section class="panel gaps">
  <h3>Not ready yet</h3>
  ${judging ? `<p>Pairwise judgments missing for:</p><ul>${judging}</ul>` : ""}
  ${rating ? `<p>Ratings missing for:</p><ul>${rating}</ul>` : ""}
</section>`;
}

export function renderConflict(expected: number, got: number): string {
  return `
<div class="conflict-banner">
  <p>This session changed somewhere else: you sent revision ${got}, the service is at ${expected}.
     Reload to pick up the latest state; unsaved edits here are dropped.</p>
  <button class="btn btn-primary" data-action="reload-session">Reload session</button>
</div>`;
}

export function renderError(message: string): string {
  return `<div class="error-banner"><p>${escapeHtml(message)}</p></div>`;
}
