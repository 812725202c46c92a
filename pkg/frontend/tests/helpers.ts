/** Shared test utilities: fixture loading, a canned four-quadrant document,
 * DOM scaffolding, and a stateful in-memory audit service. */

import { readFileSync } from "node:fs";
import { resolve } from "node:path";

import { FeedbackInfo, RevisionInfo, SessionInfo } from "../src/api.js";
import { GraphDocument } from "../src/schema.js";
import { AppElements } from "../src/main.js";

export function loadFixture(name: string): GraphDocument {
  const path = resolve(process.cwd(), "tests", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf-8")) as GraphDocument;
}

function node(
  id: string,
  origin: "source" | "output",
  x: number,
  y: number,
  extras: Partial<GraphDocument["nodes"][number]> = {},
): GraphDocument["nodes"][number] {
  return {
    id,
    origin,
    kind: "sentence",
    text: `text of ${id}`,
    span: [0, 10],
    triple: null,
    sentence_index: 0,
    x,
    y,
    nli: origin === "output" ? x : null,
    avg_sim: origin === "output" ? y : null,
    confidence: origin === "output" ? 0.75 * x + 0.25 * y : null,
    quadrant: null,
    color: null,
    ...extras,
  };
}

/** One output node per quadrant cell, colors consistent with the legend bands. */
export function fourQuadrantDocument(): GraphDocument {
  return {
    schema_version: 1,
    doc_ids: { source: "src", output: "out" },
    nodes: [
      node("q-high", "output", 0.85, 0.85, { quadrant: "HighReliability", color: "green" }),
      node("q-plausible", "output", 0.85, 0.2,
        { quadrant: "PlausibleButUnsupported", color: "orange" }),
      node("q-suspicious", "output", 0.2, 0.85,
        { quadrant: "SuspiciousContent", color: "red" }),
      node("q-potential", "output", 0.12, 0.12,
        { quadrant: "PotentialHallucination", color: "red" }),
      node("src-a", "source", 0.5, 0.65),
      node("src-b", "source", 0.45, 0.3),
    ],
    edges: [
      { source: "q-high", target: "src-a", similarity: 0.9,
        nli: { entail: 1, neutral: 0, contradict: 0 } },
      { source: "q-high", target: "src-b", similarity: 0.4,
        nli: { entail: 0, neutral: 1, contradict: 0 } },
      { source: "q-plausible", target: "src-b", similarity: 0.2,
        nli: { entail: 1, neutral: 0, contradict: 0 } },
      { source: "q-suspicious", target: "src-a", similarity: 0.8,
        nli: { entail: 0, neutral: 0, contradict: 1 } },
      { source: "q-potential", target: "src-b", similarity: 0.1,
        nli: { entail: 0, neutral: 1, contradict: 0 } },
    ],
    response: {
      avg_nli: 0.505, avg_sim: 0.505, combined: 0.505, score: 0.12,
      label: "hallucinated", failure_forced: false, threshold: 0.5,
    },
    thresholds: { tau_nli: 0.5, tau_sim: 0.5 },
    legend: { green_min: 0.75, orange_min: 0.5 },
    weights: { w_nli: 0.75, w_sim: 0.25 },
  };
}

export function buildElements(): AppElements {
  const make = <K extends keyof HTMLElementTagNameMap>(tag: K, id: string) => {
    const el = document.createElement(tag);
    el.id = id;
    document.body.appendChild(el);
    return el;
  };
  return {
    graph: make("div", "graph"),
    legend: make("div", "legend"),
    summary: make("div", "summary"),
    panel: make("aside", "panel"),
    status: make("p", "status"),
    revisionSelect: make("select", "revision-select"),
    editor: make("textarea", "editor"),
    reevaluateButton: make("button", "reevaluate"),
    createForm: make("form", "create-form"),
    sourceInput: make("textarea", "source-input"),
    outputInput: make("textarea", "output-input"),
  };
}

interface StoredRevision extends RevisionInfo {
  document: GraphDocument;
}

/**
 * Minimal stateful stand-in for the audit service. Feedback and revisions
 * persist for the lifetime of the server object, so constructing a second
 * app over the same server models a page reload.
 */
export class FakeServer {
  revisions: StoredRevision[] = [];
  feedback: FeedbackInfo[] = [];
  sourceText = "source text";
  sessionId = "fake-session";
  failNextFeedback = false;
  /** Document appended by the next reevaluate call. */
  nextDocument: GraphDocument | null = null;

  addRevision(doc: GraphDocument, outputText = "output text"): void {
    this.revisions.push({
      revision_id: this.revisions.length + 1,
      output_text: outputText,
      created_at: 1700000000 + this.revisions.length,
      label: doc.response.label,
      score: doc.response.score,
      document: doc,
    });
  }

  private session(): SessionInfo {
    return {
      session_id: this.sessionId,
      status: "ready",
      source_text: this.sourceText,
      config: {},
      error: "",
      revisions: this.revisions.map(({ document: _doc, ...info }) => info),
      feedback: [...this.feedback],
    };
  }

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input, "http://fake");
    const path = url.pathname;
    const method = init?.method ?? "GET";
    const json = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "Content-Type": "application/json" },
      });

    if (method === "GET" && path === `/sessions/${this.sessionId}`) {
      return json(this.session());
    }
    if (method === "GET" && path === `/sessions/${this.sessionId}/graph`) {
      const wanted = url.searchParams.get("revision");
      const rev = wanted === null
        ? this.revisions[this.revisions.length - 1]
        : this.revisions.find((r) => r.revision_id === Number(wanted));
      if (!rev) return json({ detail: "unknown revision" }, 404);
      return json(rev.document);
    }
    if (method === "POST" && path === `/sessions/${this.sessionId}/feedback`) {
      if (this.failNextFeedback) {
        this.failNextFeedback = false;
        return json({ detail: "injected outage" }, 503);
      }
      const body = JSON.parse(String(init?.body)) as Record<string, unknown>;
      const revision = this.revisions.find((r) => r.revision_id === body.revision_id);
      const known = revision?.document.nodes.some((n) => n.id === body.claim_id);
      if (!known) return json({ detail: "unknown claim" }, 404);
      this.feedback.push({
        revision_id: body.revision_id as number,
        claim_id: body.claim_id as string,
        verdict_override: body.verdict_override as string,
        comment: (body.comment as string) ?? "",
        timestamp: 1700000100,
      });
      return json({ ok: true, detail: "feedback recorded" });
    }
    if (method === "POST" && path === `/sessions/${this.sessionId}/reevaluate`) {
      const body = JSON.parse(String(init?.body)) as { output_text: string };
      if (!this.nextDocument) return json({ detail: "no canned revision" }, 500);
      this.addRevision(this.nextDocument, body.output_text);
      this.nextDocument = null;
      return json(this.session());
    }
    if (method === "POST" && path === "/sessions") {
      return json(this.session(), 201);
    }
    return json({ detail: `unhandled ${method} ${path}` }, 404);
  };
}
