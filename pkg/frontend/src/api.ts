/** Thin typed client for the audit service HTTP API. */

import { GraphDocument, parseDocument } from "./schema.js";

export interface RevisionInfo {
  revision_id: number;
  output_text: string;
  created_at: number;
  label: string | null;
  score: number | null;
}

export interface FeedbackInfo {
  revision_id: number;
  claim_id: string;
  verdict_override: string;
  comment: string;
  timestamp: number;
}

export interface SessionInfo {
  session_id: string;
  status: string;
  source_text: string;
  config: Record<string, unknown>;
  error: string;
  revisions: RevisionInfo[];
  feedback: FeedbackInfo[];
}

export type VerdictOverride = "confirm_reliable" | "confirm_hallucination" | "dispute";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (body && body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        // keep statusText
      }
      throw new ApiError(`${init?.method ?? "GET"} ${path}: ${detail}`, response.status);
    }
    return response.json();
  }

  private post(path: string, body: unknown): Promise<unknown> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async createSession(
    sourceText: string,
    outputText: string,
    config?: Record<string, unknown>,
  ): Promise<SessionInfo> {
    const body: Record<string, unknown> = { source_text: sourceText, output_text: outputText };
    if (config) body.config = config;
    return (await this.post("/sessions", body)) as SessionInfo;
  }

  async getSession(sessionId: string): Promise<SessionInfo> {
    return (await this.request(`/sessions/${sessionId}`)) as SessionInfo;
  }

  async getGraph(sessionId: string, revision?: number): Promise<GraphDocument> {
    const suffix = revision === undefined ? "" : `?revision=${revision}`;
    return parseDocument(await this.request(`/sessions/${sessionId}/graph${suffix}`));
  }

  async submitFeedback(
    sessionId: string,
    revisionId: number,
    claimId: string,
    verdictOverride: VerdictOverride,
    comment: string,
  ): Promise<void> {
    await this.post(`/sessions/${sessionId}/feedback`, {
      revision_id: revisionId,
      claim_id: claimId,
      verdict_override: verdictOverride,
      comment,
    });
  }

  async reevaluate(sessionId: string, outputText: string): Promise<SessionInfo> {
    return (await this.post(`/sessions/${sessionId}/reevaluate`, {
      output_text: outputText,
    })) as SessionInfo;
  }
}
