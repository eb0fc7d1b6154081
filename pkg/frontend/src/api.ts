/** Typed client for the session service. The UI talks to the backend only
 * through this module, and nothing here computes anything. */

import type {
  HealthPayload,
  JudgmentsResponse,
  JudgmentTriple,
  NodeRecord,
  Overrides,
  RatingsResponse,
  ResultPayload,
  SessionEnvelope,
  WhatifResponse,
} from "./types.js";

interface ErrorDetail {
  message?: string;
  expected?: number;
  got?: number;
  unjudged_nodes?: string[];
  unrated_alternatives?: string[];
  [key: string]: unknown;
}

export class ApiError extends Error {
  readonly status: number;
  readonly detail: ErrorDetail;

  constructor(status: number, detail: ErrorDetail) {
    super(detail.message ?? `request failed with status ${status}`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

/** Another client advanced the session; the UI should offer a reload. */
export class RevisionConflictError extends ApiError {
  readonly expected: number;
  readonly got: number;

  constructor(detail: ErrorDetail) {
    super(409, detail);
    this.name = "RevisionConflictError";
    this.expected = detail.expected ?? -1;
    this.got = detail.got ?? -1;
  }
}

/** The model cannot produce a result yet; detail says what is missing. */
export class IncompleteSessionError extends ApiError {
  readonly unjudgedNodes: string[];
  readonly unratedAlternatives: string[];

  constructor(detail: ErrorDetail) {
    super(409, detail);
    this.name = "IncompleteSessionError";
    this.unjudgedNodes = detail.unjudged_nodes ?? [];
    this.unratedAlternatives = detail.unrated_alternatives ?? [];
  }
}

function toError(status: number, body: unknown): ApiError {
  const detail: ErrorDetail =
    body && typeof body === "object" && "detail" in body
      ? ((body as { detail: unknown }).detail as ErrorDetail)
      : { message: String(body) };
  if (status === 409 && typeof detail.expected === "number") {
    return new RevisionConflictError(detail);
  }
  if (status === 409 && (detail.unjudged_nodes || detail.unrated_alternatives)) {
    return new IncompleteSessionError(detail);
  }
  return new ApiError(status, detail);
}

export interface HierarchyPatch {
  goal?: string;
  criteria?: NodeRecord[];
  alternatives?: Array<{ id: string; name?: string }>;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    let payload: unknown = null;
    const text = await response.text();
    if (text) {
      try {
        payload = JSON.parse(text);
      } catch {
        payload = { detail: { message: text } };
      }
    }
    if (!response.ok) throw toError(response.status, payload);
    return payload as T;
  }

  health(): Promise<HealthPayload> {
    return this.request("GET", "/api/health");
  }

  createSession(init: { fromTemplate?: string; model?: unknown }): Promise<SessionEnvelope> {
    const body: Record<string, unknown> = {};
    if (init.fromTemplate !== undefined) body.from_template = init.fromTemplate;
    if (init.model !== undefined) body.model = init.model;
    return this.request("POST", "/api/sessions", body);
  }

  getSession(id: string): Promise<SessionEnvelope> {
    return this.request("GET", `/api/sessions/${encodeURIComponent(id)}`);
  }

  setHierarchy(id: string, revision: number, patch: HierarchyPatch): Promise<SessionEnvelope> {
    return this.request("PUT", `/api/sessions/${encodeURIComponent(id)}/hierarchy`, {
      revision,
      ...patch,
    });
  }

  putJudgments(
    id: string,
    nodeId: string,
    revision: number,
    judgments: JudgmentTriple[],
  ): Promise<JudgmentsResponse> {
    return this.request(
      "PUT",
      `/api/sessions/${encodeURIComponent(id)}/judgments/${encodeURIComponent(nodeId)}`,
      { revision, judgments },
    );
  }

  putRatings(
    id: string,
    revision: number,
    sheets: Record<string, Record<string, number>>,
  ): Promise<RatingsResponse> {
    return this.request("PUT", `/api/sessions/${encodeURIComponent(id)}/ratings`, {
      revision,
      sheets,
    });
  }

  getResult(id: string): Promise<ResultPayload> {
    return this.request("GET", `/api/sessions/${encodeURIComponent(id)}/result`);
  }

  whatif(id: string, overrides: Overrides): Promise<WhatifResponse> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(id)}/whatif`, {
      overrides,
    });
  }
}
