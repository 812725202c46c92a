/**
 * SVG scatter renderer for the claim graph.
 *
 * Positions come straight from the document (the server layout is part of
 * the audit trail), gridlines sit at the document's thresholds, and node
 * fills use the document's color field. Hovering or selecting a node
 * highlights its matched counterparts.
 */

import { GraphDocument, GraphNode } from "./schema.js";
import { gridCell, neighborhood } from "./viewmodel.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderOptions {
  size?: number;
  margin?: number;
  onSelect?: (nodeId: string | null) => void;
}

const NODE_FILL: Record<string, string> = {
  green: "#2e9e4f",
  orange: "#e8962f",
  red: "#d23f3f",
};
const SOURCE_FILL = "#8a8f98";

const QUADRANT_LABELS: Array<{ cell: ReturnType<typeof gridCell>; dx: number; dy: number }> = [
  { cell: "HighReliability", dx: 1, dy: 1 },
  { cell: "PlausibleButUnsupported", dx: 1, dy: 0 },
  { cell: "SuspiciousContent", dx: 0, dy: 1 },
  { cell: "PotentialHallucination", dx: 0, dy: 0 },
];

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export function renderError(container: HTMLElement, message: string): void {
  container.replaceChildren();
  const panel = document.createElement("div");
  panel.className = "error-panel";
  panel.setAttribute("role", "alert");
  panel.textContent = message;
  container.appendChild(panel);
}

export function renderGraph(
  container: HTMLElement,
  doc: GraphDocument,
  options: RenderOptions = {},
): void {
  const size = options.size ?? 640;
  const margin = options.margin ?? 48;
  const span = size - 2 * margin;
  const px = (x: number): number => margin + x * span;
  const py = (y: number): number => size - margin - y * span;

  container.replaceChildren();
  const svg = svgEl("svg", {
    viewBox: `0 0 ${size} ${size}`,
    width: "100%",
    class: "claim-graph",
  });
  svg.dataset.role = "graph";

  svg.appendChild(
    svgEl("rect", { x: margin, y: margin, width: span, height: span, class: "plot-frame" }),
  );

  // Quadrant gridlines at the document thresholds.
  const { tau_nli, tau_sim } = doc.thresholds;
  svg.appendChild(
    svgEl("line", {
      x1: px(tau_nli), y1: margin, x2: px(tau_nli), y2: size - margin,
      class: "gridline", "data-threshold": "tau_nli",
    }),
  );
  svg.appendChild(
    svgEl("line", {
      x1: margin, y1: py(tau_sim), x2: size - margin, y2: py(tau_sim),
      class: "gridline", "data-threshold": "tau_sim",
    }),
  );
  for (const { cell, dx, dy } of QUADRANT_LABELS) {
    const cx = dx === 1 ? (tau_nli + 1) / 2 : tau_nli / 2;
    const cy = dy === 1 ? (tau_sim + 1) / 2 : tau_sim / 2;
    const label = svgEl("text", {
      x: px(cx), y: py(cy) - span / 5, class: "quadrant-label", "text-anchor": "middle",
    });
    label.textContent = cell.replace(/([a-z])([A-Z])/g, "$1 $2");
    svg.appendChild(label);
  }

  const xAxis = svgEl("text", {
    x: size / 2, y: size - 10, class: "axis-label", "text-anchor": "middle",
  });
  xAxis.textContent = "NLI score";
  svg.appendChild(xAxis);
  const yAxis = svgEl("text", {
    x: 14, y: size / 2, class: "axis-label", "text-anchor": "middle",
    transform: `rotate(-90 14 ${size / 2})`,
  });
  yAxis.textContent = "avg similarity";
  svg.appendChild(yAxis);

  const byId = new Map(doc.nodes.map((n) => [n.id, n]));
  for (const edge of doc.edges) {
    const a = byId.get(edge.source);
    const b = byId.get(edge.target);
    if (!a || !b) continue;
    const line = svgEl("line", {
      x1: px(a.x), y1: py(a.y), x2: px(b.x), y2: py(b.y),
      class: "edge",
      "stroke-width": (0.5 + 2.5 * Math.max(0, edge.similarity)).toFixed(2),
      "data-source": edge.source,
      "data-target": edge.target,
    });
    svg.appendChild(line);
  }

  const select = (id: string | null): void => {
    const highlight = id === null ? null : neighborhood(doc, id);
    svg.querySelectorAll<SVGElement>("[data-node-id]").forEach((el) => {
      const nodeId = el.dataset.nodeId ?? "";
      el.classList.toggle("selected", id !== null && nodeId === id);
      el.classList.toggle("dimmed", highlight !== null && !highlight.has(nodeId));
    });
    svg.querySelectorAll<SVGElement>("line.edge").forEach((el) => {
      const active =
        id !== null && (el.dataset.source === id || el.dataset.target === id);
      el.classList.toggle("edge-active", active);
    });
    options.onSelect?.(id);
  };

  for (const node of doc.nodes) {
    const shape = nodeShape(node, px(node.x), py(node.y));
    shape.dataset.nodeId = node.id;
    shape.dataset.cell = gridCell(doc, node.x, node.y);
    if (node.color) shape.dataset.color = node.color;
    shape.classList.add("node");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = node.text;
    shape.appendChild(title);
    shape.addEventListener("click", (event) => {
      event.stopPropagation();
      select(node.id);
    });
    svg.appendChild(shape);
  }
  svg.addEventListener("click", () => select(null));

  container.appendChild(svg);
}

function nodeShape(node: GraphNode, cx: number, cy: number): SVGElement {
  if (node.origin === "output") {
    const fill = node.color ? NODE_FILL[node.color] ?? SOURCE_FILL : SOURCE_FILL;
    return svgEl("circle", { cx, cy, r: 9, fill });
  }
  return svgEl("rect", {
    x: cx - 6.5, y: cy - 6.5, width: 13, height: 13, fill: SOURCE_FILL, rx: 2,
  });
}

/** Color legend and quadrant thresholds straight from document values. */
export function renderLegend(container: HTMLElement, doc: GraphDocument): void {
  container.replaceChildren();
  const list = document.createElement("ul");
  list.className = "legend";
  const rows: Array<[string, string]> = [
    ["green", `reliable (confidence ≥ ${doc.legend.green_min})`],
    ["orange", `suspicious (confidence ≥ ${doc.legend.orange_min})`],
    ["red", `likely hallucination (confidence < ${doc.legend.orange_min})`],
  ];
  for (const [color, text] of rows) {
    const item = document.createElement("li");
    const swatch = document.createElement("span");
    swatch.className = `swatch swatch-${color}`;
    swatch.style.background = NODE_FILL[color] ?? SOURCE_FILL;
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(text));
    list.appendChild(item);
  }
  const thresholds = document.createElement("li");
  thresholds.className = "legend-thresholds";
  thresholds.textContent =
    `quadrant thresholds: NLI ${doc.thresholds.tau_nli}, similarity ${doc.thresholds.tau_sim}`;
  list.appendChild(thresholds);
  container.appendChild(list);
}

/** Response-level summary strip (averages, combined score, verdict). */
export function renderSummary(container: HTMLElement, doc: GraphDocument): void {
  container.replaceChildren();
  const r = doc.response;
  const fmt = (v: number | null): string => (v === null ? "-" : v.toFixed(3));
  const entries: Array<[string, string]> = [
    ["avg NLI", fmt(r.avg_nli)],
    ["avg similarity", fmt(r.avg_sim)],
    ["combined", fmt(r.combined)],
    ["verdict", r.label ?? "-"],
  ];
  for (const [label, value] of entries) {
    const cell = document.createElement("div");
    cell.className = "metric";
    const name = document.createElement("span");
    name.className = "metric-name";
    name.textContent = label;
    const val = document.createElement("span");
    val.className = "metric-value";
    if (label === "verdict") val.dataset.verdict = value;
    val.textContent = value;
    cell.append(name, val);
    container.appendChild(cell);
  }
}
