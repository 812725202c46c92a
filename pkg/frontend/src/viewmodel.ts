/**
 * Pure projections of the graph document used by the renderer and the
 * detail panel. Everything here derives from document fields; nothing is
 * rescored client-side.
 */

import { GraphDocument, GraphEdge, GraphNode } from "./schema.js";

export type GridCell =
  | "HighReliability"
  | "SuspiciousContent"
  | "PlausibleButUnsupported"
  | "PotentialHallucination";

/** Quadrant cell of a plotted point relative to the document thresholds. */
export function gridCell(doc: GraphDocument, x: number, y: number): GridCell {
  const highNli = x >= doc.thresholds.tau_nli;
  const highSim = y >= doc.thresholds.tau_sim;
  if (highNli && highSim) return "HighReliability";
  if (highNli) return "PlausibleButUnsupported";
  if (highSim) return "SuspiciousContent";
  return "PotentialHallucination";
}

export interface MatchDetail {
  node: GraphNode;
  edge: GraphEdge;
}

export interface OutputDetail {
  kind: "output";
  node: GraphNode;
  /** Matched source claims, strongest similarity first. */
  matches: MatchDetail[];
}

export interface SourceDetail {
  kind: "source";
  node: GraphNode;
  /** Output claims that reference this source claim. */
  referencedBy: MatchDetail[];
}

export type NodeDetail = OutputDetail | SourceDetail;

export function nodeById(doc: GraphDocument, id: string): GraphNode {
  const node = doc.nodes.find((n) => n.id === id);
  if (!node) throw new Error(`unknown node ${id}`);
  return node;
}

export function nodeDetail(doc: GraphDocument, id: string): NodeDetail {
  const node = nodeById(doc, id);
  if (node.origin === "output") {
    const matches = doc.edges
      .filter((e) => e.source === id)
      .map((edge) => ({ edge, node: nodeById(doc, edge.target) }))
      .sort((a, b) => b.edge.similarity - a.edge.similarity);
    return { kind: "output", node, matches };
  }
  const referencedBy = doc.edges
    .filter((e) => e.target === id)
    .map((edge) => ({ edge, node: nodeById(doc, edge.source) }))
    .sort((a, b) => b.edge.similarity - a.edge.similarity);
  return { kind: "source", node, referencedBy };
}

/** Ids of nodes to highlight when `id` is hovered or selected. */
export function neighborhood(doc: GraphDocument, id: string): Set<string> {
  const ids = new Set<string>([id]);
  for (const edge of doc.edges) {
    if (edge.source === id) ids.add(edge.target);
    if (edge.target === id) ids.add(edge.source);
  }
  return ids;
}

export interface LegendEntry {
  color: string;
  label: string;
}

/** Legend rows derived from the document's band values, never hard-coded. */
export function legendEntries(doc: GraphDocument): LegendEntry[] {
  const { green_min, orange_min } = doc.legend;
  return [
    { color: "green", label: `confidence >= ${green_min}` },
    { color: "orange", label: `confidence >= ${orange_min}` },
    { color: "red", label: `confidence < ${orange_min}` },
  ];
}

export function formatScore(value: number | null): string {
  return value === null ? "-" : value.toFixed(3);
}
