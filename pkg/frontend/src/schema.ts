/**
 * Graph document types and validation.
 *
 * The UI is a pure client of this schema: every visual attribute traces to
 * a document field (positions, colors, quadrants, thresholds, legend bands)
 * and no scoring logic is re-implemented here. Documents with an
 * unsupported schema version are rejected outright so we never render a
 * half-understood graph.
 */

export const SUPPORTED_SCHEMA_VERSION = 1;

export type Origin = "source" | "output";
export type NodeColor = "green" | "orange" | "red";

export interface EdgeVerdict {
  entail: number;
  neutral: number;
  contradict: number;
}

export interface GraphNode {
  id: string;
  origin: Origin;
  kind: "sentence" | "triple";
  text: string;
  span: [number, number];
  triple: [string, string, string] | null;
  sentence_index: number | null;
  x: number;
  y: number;
  nli: number | null;
  avg_sim: number | null;
  confidence: number | null;
  quadrant: string | null;
  color: NodeColor | null;
}

export interface GraphEdge {
  /** Output claim id (edge direction is output -> source). */
  source: string;
  /** Matched source claim id. */
  target: string;
  similarity: number;
  nli: EdgeVerdict | null;
}

export interface ResponseSummary {
  avg_nli: number | null;
  avg_sim: number | null;
  combined: number | null;
  score: number | null;
  label: "consistent" | "hallucinated" | null;
  failure_forced: boolean | null;
  threshold: number | null;
  note?: string;
}

export interface GraphDocument {
  schema_version: number;
  doc_ids: { source: string; output: string };
  nodes: GraphNode[];
  edges: GraphEdge[];
  response: ResponseSummary;
  thresholds: { tau_nli: number; tau_sim: number };
  legend: { green_min: number; orange_min: number };
  weights: { w_nli: number; w_sim: number };
}

export class SchemaError extends Error {}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

/** Validate an untrusted payload; throws SchemaError rather than rendering partially. */
export function parseDocument(raw: unknown): GraphDocument {
  if (!isRecord(raw)) {
    throw new SchemaError("graph document must be a JSON object");
  }
  if (raw.schema_version !== SUPPORTED_SCHEMA_VERSION) {
    throw new SchemaError(
      `unsupported schema version ${String(raw.schema_version)}; ` +
        `this client understands version ${SUPPORTED_SCHEMA_VERSION} — upgrade the client`,
    );
  }
  if (!Array.isArray(raw.nodes) || !Array.isArray(raw.edges)) {
    throw new SchemaError("graph document is missing nodes or edges");
  }
  for (const key of ["thresholds", "legend", "response", "weights"]) {
    if (!isRecord(raw[key])) {
      throw new SchemaError(`graph document is missing '${key}'`);
    }
  }
  const doc = raw as unknown as GraphDocument;
  const ids = new Set<string>();
  for (const node of doc.nodes) {
    if (typeof node.id !== "string" || typeof node.x !== "number" || typeof node.y !== "number") {
      throw new SchemaError("node entries need id/x/y");
    }
    if (node.origin !== "source" && node.origin !== "output") {
      throw new SchemaError(`node ${node.id} has unknown origin ${String(node.origin)}`);
    }
    ids.add(node.id);
  }
  for (const edge of doc.edges) {
    if (!ids.has(edge.source) || !ids.has(edge.target)) {
      throw new SchemaError(`edge ${edge.source} -> ${edge.target} references unknown nodes`);
    }
  }
  return doc;
}
