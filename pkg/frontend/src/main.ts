/**
 * Audit UI application shell.
 *
 * Wires the API client, scatter renderer, and detail panel together:
 * create or load a session, flip between revisions, capture feedback
 * (drafts survive a failed POST for retry), and re-evaluate edited
 * responses — the new revision renders as soon as the server returns.
 */

import { ApiClient, SessionInfo } from "./api.js";
import { GraphDocument, SchemaError } from "./schema.js";
import { clearPanel, renderPanel } from "./panel.js";
import { renderError, renderGraph, renderLegend, renderSummary } from "./render.js";

export interface AppElements {
  graph: HTMLElement;
  legend: HTMLElement;
  summary: HTMLElement;
  panel: HTMLElement;
  status: HTMLElement;
  revisionSelect: HTMLSelectElement;
  editor: HTMLTextAreaElement;
  reevaluateButton: HTMLButtonElement;
  createForm: HTMLFormElement;
  sourceInput: HTMLTextAreaElement;
  outputInput: HTMLTextAreaElement;
}

export class AuditApp {
  private session: SessionInfo | null = null;
  private document_: GraphDocument | null = null;
  private currentRevision: number | null = null;
  private selectedNode: string | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly el: AppElements,
  ) {
    el.revisionSelect.addEventListener("change", () => {
      void this.showRevision(Number(el.revisionSelect.value));
    });
    el.reevaluateButton.addEventListener("click", () => {
      void this.reevaluate();
    });
    el.createForm.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.createSession(el.sourceInput.value, el.outputInput.value);
    });
    clearPanel(el.panel);
  }

  get sessionId(): string | null {
    return this.session?.session_id ?? null;
  }

  get revision(): number | null {
    return this.currentRevision;
  }

  private setStatus(text: string, isError = false): void {
    this.el.status.textContent = text;
    this.el.status.classList.toggle("status-error", isError);
  }

  async createSession(sourceText: string, outputText: string): Promise<void> {
    this.setStatus("evaluating…");
    try {
      const session = await this.api.createSession(sourceText, outputText);
      await this.loadSession(session.session_id);
    } catch (err) {
      this.setStatus(`session creation failed: ${String(err)}`, true);
    }
  }

  async loadSession(sessionId: string): Promise<void> {
    try {
      this.session = await this.api.getSession(sessionId);
    } catch (err) {
      this.setStatus(`could not load session: ${String(err)}`, true);
      return;
    }
    if (this.session.status === "failed") {
      renderError(this.el.graph, `evaluation failed: ${this.session.error}`);
      this.setStatus(`session ${sessionId} failed`, true);
      return;
    }
    const revisions = this.session.revisions;
    this.el.revisionSelect.replaceChildren(
      ...revisions.map((rev) => {
        const option = document.createElement("option");
        option.value = String(rev.revision_id);
        option.textContent = `revision ${rev.revision_id} (${rev.label ?? "pending"})`;
        return option;
      }),
    );
    if (revisions.length === 0) {
      this.setStatus(`session ${sessionId} is ${this.session.status}…`);
      return;
    }
    const latest = revisions[revisions.length - 1]!;
    this.el.revisionSelect.value = String(latest.revision_id);
    this.el.editor.value = latest.output_text;
    await this.showRevision(latest.revision_id);
  }

  async showRevision(revisionId: number): Promise<void> {
    if (!this.session) return;
    try {
      this.document_ = await this.api.getGraph(this.session.session_id, revisionId);
    } catch (err) {
      if (err instanceof SchemaError) {
        renderError(this.el.graph, err.message);
        this.setStatus("unsupported graph document", true);
        return;
      }
      this.setStatus(`could not load graph: ${String(err)}`, true);
      return;
    }
    this.currentRevision = revisionId;
    this.selectedNode = null;
    renderGraph(this.el.graph, this.document_, {
      onSelect: (nodeId) => this.onSelect(nodeId),
    });
    renderLegend(this.el.legend, this.document_);
    renderSummary(this.el.summary, this.document_);
    clearPanel(this.el.panel);
    this.setStatus(
      `session ${this.session.session_id}, revision ${revisionId}, ` +
        `verdict ${this.document_.response.label ?? "-"}`,
    );
  }

  private onSelect(nodeId: string | null): void {
    this.selectedNode = nodeId;
    if (!this.document_ || !this.session || this.currentRevision === null) return;
    if (nodeId === null) {
      clearPanel(this.el.panel);
      return;
    }
    renderPanel(this.el.panel, this.document_, nodeId, this.session.feedback,
      this.currentRevision, {
        onFeedback: (draft) => {
          void this.submitFeedback(draft.claimId, draft.verdictOverride, draft.comment);
        },
      });
  }

  async submitFeedback(
    claimId: string,
    verdictOverride: "confirm_reliable" | "confirm_hallucination" | "dispute",
    comment: string,
  ): Promise<void> {
    if (!this.session || this.currentRevision === null) return;
    try {
      await this.api.submitFeedback(
        this.session.session_id, this.currentRevision, claimId, verdictOverride, comment);
    } catch (err) {
      // Draft stays in the form; the reviewer can retry.
      this.setStatus(`feedback not saved (${String(err)}) — retry`, true);
      return;
    }
    this.session = await this.api.getSession(this.session.session_id);
    this.setStatus("feedback recorded");
    if (this.selectedNode) this.onSelect(this.selectedNode);
  }

  async reevaluate(): Promise<void> {
    if (!this.session) return;
    this.setStatus("re-evaluating…");
    try {
      await this.api.reevaluate(this.session.session_id, this.el.editor.value);
    } catch (err) {
      this.setStatus(`re-evaluation failed: ${String(err)}`, true);
      return;
    }
    await this.loadSession(this.session.session_id);
  }
}

export function defaultApiBase(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? "http://127.0.0.1:8000";
}

export function bootstrap(): AuditApp {
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el as T;
  };
  const app = new AuditApp(new ApiClient(defaultApiBase()), {
    graph: byId("graph"),
    legend: byId("legend"),
    summary: byId("summary"),
    panel: byId("panel"),
    status: byId("status"),
    revisionSelect: byId<HTMLSelectElement>("revision-select"),
    editor: byId<HTMLTextAreaElement>("editor"),
    reevaluateButton: byId<HTMLButtonElement>("reevaluate"),
    createForm: byId<HTMLFormElement>("create-form"),
    sourceInput: byId<HTMLTextAreaElement>("source-input"),
    outputInput: byId<HTMLTextAreaElement>("output-input"),
  });
  const session = new URLSearchParams(window.location.search).get("session");
  if (session) void app.loadSession(session);
  return app;
}

declare global {
  interface Window {
    claimgraphApp?: AuditApp;
  }
}

if (typeof document !== "undefined" && document.getElementById("graph")) {
  window.claimgraphApp = bootstrap();
}
