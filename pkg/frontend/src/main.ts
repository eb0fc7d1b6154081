/** Browser entry point: owns app state, wires events by delegation, and
 * re-renders from service responses. All decision arithmetic stays on the
 * service side; this file only moves data between controls and endpoints. */

import {
  ApiClient,
  ApiError,
  IncompleteSessionError,
  RevisionConflictError,
} from "./api.js";
import { encodeJudgment, type PairValue } from "./format.js";
import {
  pairKey,
  prefillPairs,
  sessionView,
  wizardPairs,
  type SessionView,
  type WizardPair,
} from "./state.js";
import {
  escapeHtml,
  renderConflict,
  renderDashboard,
  renderError,
  renderGaps,
  renderRatings,
  renderTree,
  renderWhatifResult,
  renderWizard,
} from "./render.js";
import type {
  JudgmentsResponse,
  JudgmentTriple,
  RankingPayload,
  ResultPayload,
} from "./types.js";

const STORAGE_KEY = "ahpkit.session";

type Tab = "hierarchy" | "ratings" | "dashboard";

interface WizardState {
  nodeId: string;
  pairs: WizardPair[];
  index: number;
  values: Map<string, PairValue>;
  error: string | null;
  result: JudgmentsResponse | null;
}

class App {
  private readonly api = new ApiClient();
  private view: SessionView | null = null;
  private tab: Tab = "hierarchy";
  private wizard: WizardState | null = null;
  private ratingsDraft: Record<string, Record<string, number | null>> = {};
  private banner = "";
  private result: ResultPayload | null = null;
  private gaps: { unjudged: string[]; unrated: string[] } | null = null;
  private whatifRanking: RankingPayload | null = null;
  private whatifPick = { alt: "", leaf: "", rating: 5 };

  constructor(private readonly root: HTMLElement) {
    root.addEventListener("click", (e) => this.onClick(e));
    root.addEventListener("change", (e) => this.onChange(e));
  }

  async boot(): Promise<void> {
    const stored = localStorage.getItem(STORAGE_KEY);
    if (stored) {
      try {
        await this.loadSession(stored);
        return;
      } catch {
        localStorage.removeItem(STORAGE_KEY);
      }
    }
    this.render();
  }

  // ------------------------------------------------------------- data flow

  private async loadSession(id: string): Promise<void> {
    const envelope = await this.api.getSession(id);
    this.view = sessionView(envelope);
    this.seedRatingsDraft();
    this.render();
  }

  private async refreshSession(): Promise<void> {
    if (!this.view) return;
    const envelope = await this.api.getSession(this.view.id);
    this.view = sessionView(envelope);
    this.seedRatingsDraft();
  }

  private seedRatingsDraft(): void {
    if (!this.view) return;
    const draft: Record<string, Record<string, number | null>> = {};
    for (const alt of this.view.alternatives) {
      const sheet = this.view.sheets[alt.id] ?? {};
      draft[alt.id] = {};
      for (const leaf of this.view.leafIds) {
        draft[alt.id][leaf] = sheet[leaf] ?? null;
      }
    }
    this.ratingsDraft = draft;
  }

  private async startSession(template: string | null): Promise<void> {
    this.banner = "";
    try {
      const envelope = await this.api.createSession(
        template ? { fromTemplate: template } : {},
      );
      localStorage.setItem(STORAGE_KEY, envelope.id);
      this.view = sessionView(envelope);
      this.tab = "hierarchy";
      this.wizard = null;
      this.result = null;
      this.gaps = null;
      this.whatifRanking = null;
      this.seedRatingsDraft();
    } catch (err) {
      this.banner = renderError(this.describe(err));
    }
    this.render();
  }

  private describe(err: unknown): string {
    if (err instanceof ApiError) return err.message;
    if (err instanceof Error) return err.message;
    return String(err);
  }

  private handleFailure(err: unknown): void {
    if (err instanceof RevisionConflictError) {
      this.banner = renderConflict(err.expected, err.got);
    } else {
      this.banner = renderError(this.describe(err));
    }
    this.render();
  }

  // --------------------------------------------------------------- wizard

  private openWizard(nodeId: string): void {
    if (!this.view) return;
    const node = this.view.byId.get(nodeId);
    if (!node || !node.judgeable) return;
    this.tab = "hierarchy";
    this.wizard = {
      nodeId,
      pairs: wizardPairs(node),
      index: 0,
      values: prefillPairs(node.matrix),
      error: null,
      result: null,
    };
    this.render();
  }

  private wizardPairValue(w: WizardState): PairValue {
    const pair = w.pairs[w.index];
    return w.values.get(pairKey(pair.i, pair.j)) ?? { direction: "row", intensity: 1 };
  }

  private setWizardValue(mut: (v: PairValue) => PairValue): void {
    const w = this.wizard;
    if (!w) return;
    const pair = w.pairs[w.index];
    w.values.set(pairKey(pair.i, pair.j), mut(this.wizardPairValue(w)));
    w.error = null;
    this.render();
  }

  private async submitWizard(): Promise<void> {
    const w = this.wizard;
    if (!w || !this.view) return;
    // every pair defaults to "equal", so the triangle is always complete
    const judgments: JudgmentTriple[] = w.pairs.map((p) => [
      p.i,
      p.j,
      encodeJudgment(w.values.get(pairKey(p.i, p.j)) ?? { direction: "row", intensity: 1 }),
    ]);
    try {
      const response = await this.api.putJudgments(
        this.view.id,
        w.nodeId,
        this.view.revision,
        judgments,
      );
      w.result = response;
      await this.refreshSession();
      this.result = null;
      this.whatifRanking = null;
      this.render();
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        w.error = this.describe(err);
        this.render();
        return;
      }
      this.handleFailure(err);
    }
  }

  // -------------------------------------------------------------- ratings

  private async saveRatings(): Promise<void> {
    if (!this.view) return;
    const sheets: Record<string, Record<string, number>> = {};
    for (const [altId, row] of Object.entries(this.ratingsDraft)) {
      const cells: Record<string, number> = {};
      for (const [leaf, value] of Object.entries(row)) {
        if (value != null) cells[leaf] = value;
      }
      if (Object.keys(cells).length > 0) sheets[altId] = cells;
    }
    try {
      await this.api.putRatings(this.view.id, this.view.revision, sheets);
      await this.refreshSession();
      this.result = null;
      this.whatifRanking = null;
      this.banner = "";
      this.render();
    } catch (err) {
      this.handleFailure(err);
    }
  }

  // ------------------------------------------------------------ dashboard

  private async refreshResult(): Promise<void> {
    if (!this.view) return;
    try {
      this.result = await this.api.getResult(this.view.id);
      this.gaps = null;
    } catch (err) {
      if (err instanceof IncompleteSessionError) {
        this.result = null;
        this.gaps = {
          unjudged: err.unjudgedNodes,
          unrated: err.unratedAlternatives,
        };
      } else {
        this.handleFailure(err);
        return;
      }
    }
    this.render();
  }

  private async runWhatif(): Promise<void> {
    if (!this.view) return;
    const { alt, leaf, rating } = this.whatifPick;
    const overrides =
      alt && leaf ? { [alt]: { [leaf]: rating } } : {};
    try {
      const response = await this.api.whatif(this.view.id, overrides);
      this.whatifRanking = response.ranking;
      this.render();
    } catch (err) {
      this.handleFailure(err);
    }
  }

  // --------------------------------------------------------------- events

  private onClick(e: Event): void {
    const target = (e.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset.action;
    switch (action) {
      case "start":
        void this.startSession(target.dataset.template || null);
        break;
      case "new-session":
        localStorage.removeItem(STORAGE_KEY);
        this.view = null;
        this.wizard = null;
        this.result = null;
        this.gaps = null;
        this.whatifRanking = null;
        this.banner = "";
        this.render();
        break;
      case "tab":
        this.tab = (target.dataset.tab as Tab) ?? "hierarchy";
        this.banner = "";
        this.render();
        if (this.tab === "dashboard") void this.refreshResult();
        break;
      case "judge":
        this.openWizard(target.dataset.node ?? "");
        break;
      case "direction":
        this.setWizardValue((v) => ({
          direction: target.dataset.dir === "col" ? "col" : "row",
          intensity: v.intensity === 1 ? 3 : v.intensity,
        }));
        break;
      case "pair-prev":
        if (this.wizard && this.wizard.index > 0) {
          this.wizard.index -= 1;
          this.render();
        }
        break;
      case "pair-next":
        if (this.wizard && this.wizard.index + 1 < this.wizard.pairs.length) {
          // leaving a pair untouched records it as "equal"
          const pair = this.wizard.pairs[this.wizard.index];
          if (!this.wizard.values.has(pairKey(pair.i, pair.j))) {
            this.wizard.values.set(pairKey(pair.i, pair.j), {
              direction: "row",
              intensity: 1,
            });
          }
          this.wizard.index += 1;
          this.render();
        }
        break;
      case "wizard-submit":
        void this.submitWizard();
        break;
      case "wizard-cancel":
      case "wizard-close":
        this.wizard = null;
        this.render();
        break;
      case "goto-ratings":
        this.tab = "ratings";
        this.render();
        break;
      case "save-ratings":
        void this.saveRatings();
        break;
      case "run-whatif":
        void this.runWhatif();
        break;
      case "clear-whatif":
        this.whatifRanking = null;
        this.render();
        break;
      case "reload-session":
        this.banner = "";
        this.wizard = null;
        void this.loadSession(this.view?.id ?? "").catch((err) => this.handleFailure(err));
        break;
      default:
        break;
    }
  }

  private onChange(e: Event): void {
    const el = e.target as HTMLElement;
    if (el instanceof HTMLSelectElement && el.dataset.action === "intensity") {
      const intensity = Number(el.value);
      this.setWizardValue((v) => ({ direction: v.direction, intensity }));
      return;
    }
    if (el instanceof HTMLInputElement && el.dataset.rating !== undefined) {
      const alt = el.dataset.alt ?? "";
      const leaf = el.dataset.leaf ?? "";
      const raw = el.value.trim();
      if (!this.ratingsDraft[alt]) return;
      this.ratingsDraft[alt][leaf] = raw === "" ? null : Number(raw);
      return; // no re-render: keep focus in the grid
    }
    if (el instanceof HTMLSelectElement && el.dataset.whatif) {
      const field = el.dataset.whatif;
      if (field === "alt") this.whatifPick.alt = el.value;
      if (field === "leaf") this.whatifPick.leaf = el.value;
      if (field === "rating") this.whatifPick.rating = Number(el.value);
    }
  }

  // --------------------------------------------------------------- render

  private render(): void {
    if (!this.view) {
      this.root.innerHTML = this.renderStart();
      return;
    }
    const v = this.view;
    const tabs = (["hierarchy", "ratings", "dashboard"] as Tab[])
      .map(
        (t) =>
          `<button class="tab${t === this.tab ? " active" : ""}" data-action="tab" data-tab="${t}">` +
          `${t[0].toUpperCase()}${t.slice(1)}</button>`,
      )
      .join("");
    let body = "";
    if (this.tab === "hierarchy") {
      body = this.wizard ? this.renderWizardPane() : renderTree(v);
    } else if (this.tab === "ratings") {
      body = renderRatings(v, this.ratingsDraft);
    } else {
      body = this.renderDashboardPane();
    }
    this.root.innerHTML = `
<header class="app-header">
  <div>
    <h1>${escapeHtml(v.goal)}</h1>
    <p class="session-meta">session ${escapeHtml(v.id.slice(0, 8))} · revision ${v.revision}</p>
  </div>
  <button class="btn" data-action="new-session">New session</button>
</header>
${this.banner}
<nav class="tabs">${tabs}</nav>
<main>${body}</main>`;
  }

  private renderStart(): string {
    return `
<header class="app-header"><h1>Decision sessions</h1></header>
${this.banner}
<main class="start">
  <p>Pick a starting point:</p>
  <div class="start-cards">
    <button class="card" data-action="start" data-template="paper-api">
      <strong>Pipe vendor selection</strong>
      <span>Worked example: five vendors scored against a four-branch criteria tree.</span>
    </button>
    <button class="card" data-action="start" data-template="paper-is">
      <strong>Material grade comparison</strong>
      <span>Same tree, two candidate grades plus three vendors.</span>
    </button>
    <button class="card" data-action="start" data-template="">
      <strong>Blank model</strong>
      <span>Start from an empty goal and build your own hierarchy over the API.</span>
    </button>
  </div>
</main>`;
  }

  private renderWizardPane(): string {
    const w = this.wizard;
    const v = this.view;
    if (!w || !v) return "";
    const node = v.byId.get(w.nodeId);
    if (!node) return "";
    return renderWizard({
      node,
      pairs: w.pairs,
      index: w.index,
      values: w.values,
      error: w.error,
      result: w.result,
      view: v,
    });
  }

  private renderDashboardPane(): string {
    const v = this.view;
    if (!v) return "";
    if (this.gaps) {
      return renderGaps(this.gaps.unjudged, this.gaps.unrated, v);
    }
    if (!this.result) {
      return `<p class="empty-note">Loading…</p>`;
    }
    const dashboard = renderDashboard(this.result, v);
    const whatif = this.renderWhatifPane(v);
    return dashboard + whatif;
  }

  private renderWhatifPane(v: SessionView): string {
    if (!this.result?.ranking) return "";
    const altOptions = v.alternatives
      .map(
        (a) =>
          `<option value="${escapeHtml(a.id)}"${a.id === this.whatifPick.alt ? " selected" : ""}>` +
          `${escapeHtml(a.name)}</option>`,
      )
      .join("");
    const leafOptions = v.leafIds
      .map(
        (leaf) =>
          `<option value="${escapeHtml(leaf)}"${leaf === this.whatifPick.leaf ? " selected" : ""}>` +
          `${escapeHtml(v.leafNames.get(leaf) ?? leaf)}</option>`,
      )
      .join("");
    const ratingOptions = Array.from({ length: 11 }, (_, r) => r)
      .map(
        (r) =>
          `<option value="${r}"${r === this.whatifPick.rating ? " selected" : ""}>${r}</option>`,
      )
      .join("");
    const outcome = this.whatifRanking
      ? renderWhatifResult(this.whatifRanking, v) +
        `<button class="btn btn-quiet" data-action="clear-whatif">Clear</button>`
      : "";
    return `
<section class="panel whatif">
  <h3>What if…</h3>
  <p>Try one different rating without touching the saved model.</p>
  <div class="whatif-controls">
    <select data-whatif="alt"><option value="">alternative…</option>${altOptions}</select>
    <select data-whatif="leaf"><option value="">factor…</option>${leafOptions}</select>
    <select data-whatif="rating">${ratingOptions}</select>
    <button class="btn btn-primary" data-action="run-whatif">Recompute</button>
  </div>
  ${outcome}
</section>`;
  }
}

const rootEl = document.getElementById("app");
if (rootEl) {
  void new App(rootEl).boot();
}

export { App };
