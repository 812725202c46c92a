"""Claim graph assembly, anchored force-directed layout, and export.

Output nodes are spring-anchored to their semantic coordinates
(x = NLI score, y = average similarity) rather than frozen there, so
coincident nodes can separate; source nodes have no anchor and settle by
edge springs alone (springs pull the source endpoint, keeping anchored
nodes within their fidelity tolerance). Edge rest length shrinks as
similarity grows, so stronger matches sit closer. The stepping is
velocity-free gradient descent with a fixed iteration count: determinism
matters more than aesthetics at these graph sizes.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .decompose import Claim
from .errors import ConsistencyError, InputError
from .judge import ResponseVerdict
from .match import MatchSet, SimilarityEdge
from .score import (
    ClaimAssessment,
    ColorBands,
    ConfidenceWeights,
    QuadrantThresholds,
    ResponseMetrics,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class GraphNode:
    claim: Claim
    assessment: ClaimAssessment | None  # present iff the claim is an output claim


@dataclass(frozen=True)
class ClaimGraph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[SimilarityEdge, ...]
    doc_ids: tuple[str, str]  # (source document id, output id)


@dataclass(frozen=True)
class NodePosition:
    claim_id: str
    x: float
    y: float


@dataclass(frozen=True)
class LayoutConfig:
    node_radius: float = 0.02
    anchor_strength: float = 1.0
    spring_strength: float = 0.3
    repulsion_strength: float = 0.005
    l_min: float = 0.05
    l_max: float = 0.6
    iterations: int = 300
    step: float = 0.01
    rng_seed: int = 0
    # Per-iteration displacement cap; keeps the fixed-step integrator stable.
    max_displacement: float = 0.05

    def __post_init__(self) -> None:
        if self.l_min >= self.l_max:
            raise InputError(f"l_min must be < l_max, got {self.l_min} >= {self.l_max}")
        if self.iterations < 1:
            raise InputError("iterations must be >= 1")
        if min(self.anchor_strength, self.spring_strength, self.repulsion_strength) < 0:
            raise InputError("strengths must be non-negative")

    def rest_length(self, sim01: float) -> float:
        """Strictly decreasing in similarity: perfect matches sit at l_min."""
        return self.l_min + (1.0 - sim01) * (self.l_max - self.l_min)


def build_graph(
    claims: list[Claim],
    matchsets: list[MatchSet],
    assessments: list[ClaimAssessment],
    include_unreferenced: bool = False,
    doc_ids: tuple[str, str] = ("", ""),
) -> ClaimGraph:
    """Assemble nodes and edges; source claims appear only when referenced
    by an edge unless ``include_unreferenced`` is set."""
    output_claims = [c for c in claims if c.origin == "output"]
    source_claims = [c for c in claims if c.origin == "source"]
    by_id = {c.id: c for c in claims}
    matchset_by_id = {m.output_claim_id: m for m in matchsets}
    assessment_by_id = {a.claim_id: a for a in assessments}

    problems = []
    if not output_claims:
        raise ConsistencyError("graph requires at least one output claim")
    for claim in output_claims:
        if claim.id not in matchset_by_id:
            problems.append(f"output claim {claim.id} has no matchset")
        if claim.id not in assessment_by_id:
            problems.append(f"output claim {claim.id} has no assessment")
    edges: list[SimilarityEdge] = []
    for claim in output_claims:
        for edge in matchset_by_id.get(claim.id, MatchSet(claim.id, (), 0)).edges:
            if edge.source_claim_id not in by_id:
                problems.append(f"edge references unknown source claim {edge.source_claim_id}")
            else:
                edges.append(edge)
    for mset in matchsets:
        if mset.output_claim_id not in by_id:
            problems.append(f"matchset references unknown output claim {mset.output_claim_id}")
        if not mset.edges:
            problems.append(f"matchset for {mset.output_claim_id} is empty")
    if problems:
        raise ConsistencyError("; ".join(problems))

    referenced = {e.source_claim_id for e in edges}
    nodes = [GraphNode(c, assessment_by_id[c.id]) for c in output_claims]
    nodes += [
        GraphNode(c, None)
        for c in source_claims
        if include_unreferenced or c.id in referenced
    ]
    return ClaimGraph(nodes=tuple(nodes), edges=tuple(edges), doc_ids=doc_ids)


def _pair_direction(i: int, j: int) -> tuple[float, float]:
    """Deterministic unit vector used to separate exactly coincident nodes."""
    theta = 2.0 * math.pi * ((i * 131 + j * 197) % 997) / 997.0
    return math.cos(theta), math.sin(theta)


def _separate_overlaps(
    pos: list[list[float]], min_dist: float, passes: int
) -> list[tuple[int, int]]:
    """Positional overlap resolution; returns pairs still overlapping."""
    n = len(pos)
    offenders: list[tuple[int, int]] = []
    for _ in range(passes):
        offenders = []
        for i in range(n):
            for j in range(i + 1, n):
                dx = pos[i][0] - pos[j][0]
                dy = pos[i][1] - pos[j][1]
                dist = math.hypot(dx, dy)
                if dist >= min_dist:
                    continue
                offenders.append((i, j))
                if dist < 1e-12:
                    ux, uy = _pair_direction(i, j)
                else:
                    ux, uy = dx / dist, dy / dist
                shift = (min_dist - dist) / 2.0 + 1e-9
                pos[i][0] += ux * shift
                pos[i][1] += uy * shift
                pos[j][0] -= ux * shift
                pos[j][1] -= uy * shift
        if not offenders:
            break
    return offenders


def layout(graph: ClaimGraph, cfg: LayoutConfig = LayoutConfig()) -> list[NodePosition]:
    """Deterministic layout for a consistent graph.

    Output nodes start at their (nli, avg_sim) anchors; source nodes start
    at seeded random positions. Residual overlap after the final cleanup is
    logged (with the offending pairs) and positions are still returned.
    """
    ids = [node.claim.id for node in graph.nodes]
    index = {cid: i for i, cid in enumerate(ids)}
    anchors: dict[int, tuple[float, float]] = {}
    rng = np.random.default_rng(cfg.rng_seed)
    pos: list[list[float]] = []
    for i, node in enumerate(graph.nodes):
        if node.assessment is not None:
            anchor = (node.assessment.nli, node.assessment.avg_sim)
            anchors[i] = anchor
            pos.append([anchor[0], anchor[1]])
        else:
            pos.append([float(rng.uniform(0.05, 0.95)), float(rng.uniform(0.05, 0.95))])

    springs = [
        (index[e.output_claim_id], index[e.source_claim_id], cfg.rest_length(e.sim01))
        for e in graph.edges
    ]
    n = len(pos)
    min_dist = 2.0 * cfg.node_radius

    for _ in range(cfg.iterations):
        force = [[0.0, 0.0] for _ in range(n)]
        for i, (ax, ay) in anchors.items():
            force[i][0] += cfg.anchor_strength * (ax - pos[i][0])
            force[i][1] += cfg.anchor_strength * (ay - pos[i][1])
        for a, b, rest in springs:
            # One-sided spring: only the source endpoint moves. Anchored
            # output nodes would otherwise drift beyond the anchor-fidelity
            # tolerance whenever several edges share a source.
            dx = pos[a][0] - pos[b][0]
            dy = pos[a][1] - pos[b][1]
            dist = math.hypot(dx, dy)
            if dist < 1e-12:
                continue
            mag = cfg.spring_strength * (dist - rest)
            force[b][0] += mag * dx / dist
            force[b][1] += mag * dy / dist
        for i in range(n):
            for j in range(i + 1, n):
                dx = pos[i][0] - pos[j][0]
                dy = pos[i][1] - pos[j][1]
                dist = math.hypot(dx, dy)
                if dist >= min_dist:
                    continue
                if dist < 1e-12:
                    ux, uy = _pair_direction(i, j)
                else:
                    ux, uy = dx / dist, dy / dist
                mag = cfg.repulsion_strength * (min_dist - dist) / min_dist
                force[i][0] += ux * mag
                force[i][1] += uy * mag
                force[j][0] -= ux * mag
                force[j][1] -= uy * mag
        for i in range(n):
            dx = cfg.step * force[i][0]
            dy = cfg.step * force[i][1]
            norm = math.hypot(dx, dy)
            if norm > cfg.max_displacement:
                dx *= cfg.max_displacement / norm
                dy *= cfg.max_displacement / norm
            pos[i][0] = min(1.0, max(0.0, pos[i][0] + dx))
            pos[i][1] = min(1.0, max(0.0, pos[i][1] + dy))
        _separate_overlaps(pos, min_dist, passes=4)

    offenders = _separate_overlaps(pos, min_dist, passes=200)
    if offenders:
        pairs = [(ids[i], ids[j]) for i, j in offenders]
        log.warning("layout left %d overlapping pairs: %s", len(pairs), pairs)

    return [NodePosition(claim_id=cid, x=pos[i][0], y=pos[i][1]) for i, cid in enumerate(ids)]


def export_graph_json(
    graph: ClaimGraph,
    positions: list[NodePosition],
    metrics: ResponseMetrics,
    verdict: ResponseVerdict | None = None,
    thresholds: QuadrantThresholds = QuadrantThresholds(),
    bands: ColorBands = ColorBands(),
    weights: ConfidenceWeights = ConfidenceWeights(),
    edge_verdicts: dict[tuple[str, str], dict] | None = None,
) -> dict:
    """Produce the versioned document consumed by the audit UI.

    ``edge_verdicts`` optionally attaches per-edge NLI components keyed by
    (output_claim_id, source_claim_id). Serialize with
    :func:`graph_json_bytes` for byte-reproducible exports.
    """
    pos_by_id = {p.claim_id: p for p in positions}
    missing = [n.claim.id for n in graph.nodes if n.claim.id not in pos_by_id]
    if missing:
        raise ConsistencyError(f"positions missing for nodes: {missing}")

    nodes = []
    for node in graph.nodes:
        claim, assessment = node.claim, node.assessment
        p = pos_by_id[claim.id]
        entry = dict(claim.to_json())
        entry.setdefault("triple", None)
        entry.setdefault("sentence_index", None)
        entry.update({"x": p.x, "y": p.y})
        if assessment is not None:
            entry.update({
                "nli": assessment.nli,
                "avg_sim": assessment.avg_sim,
                "confidence": assessment.confidence,
                "quadrant": assessment.quadrant,
                "color": assessment.color,
            })
        else:
            entry.update({"nli": None, "avg_sim": None, "confidence": None,
                          "quadrant": None, "color": None})
        nodes.append(entry)

    edges = []
    for edge in graph.edges:
        entry = {
            "source": edge.output_claim_id,  # edge direction: output -> source claim
            "target": edge.source_claim_id,
            "similarity": edge.similarity,
            "nli": None,
        }
        if edge_verdicts is not None:
            entry["nli"] = edge_verdicts.get((edge.output_claim_id, edge.source_claim_id))
        edges.append(entry)

    return {
        "schema_version": SCHEMA_VERSION,
        "doc_ids": {"source": graph.doc_ids[0], "output": graph.doc_ids[1]},
        "nodes": nodes,
        "edges": edges,
        "response": {
            "avg_nli": metrics.avg_nli,
            "avg_sim": metrics.avg_sim,
            "combined": metrics.combined,
            "score": verdict.response_score if verdict else None,
            "label": verdict.label if verdict else None,
            "failure_forced": verdict.failure_forced if verdict else None,
            "threshold": verdict.threshold if verdict else None,
        },
        "thresholds": {"tau_nli": thresholds.tau_nli, "tau_sim": thresholds.tau_sim},
        "legend": {"green_min": bands.green_min, "orange_min": bands.orange_min},
        "weights": {"w_nli": weights.w_nli, "w_sim": weights.w_sim},
    }


def graph_json_bytes(document: dict) -> bytes:
    """Canonical serialization: stable key order, no whitespace."""
    return json.dumps(document, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False).encode("utf-8")


def parse_graph_json(document: dict) -> tuple[ClaimGraph, list[NodePosition]]:
    """Rebuild the graph and positions from an exported document."""
    if document.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"unsupported schema version {document.get('schema_version')}")
    nodes = []
    positions = []
    for entry in document["nodes"]:
        claim = Claim.from_json(entry)
        assessment = None
        if entry.get("quadrant") is not None:
            assessment = ClaimAssessment(
                claim_id=claim.id,
                nli=entry["nli"],
                avg_sim=entry["avg_sim"],
                confidence=entry["confidence"],
                quadrant=entry["quadrant"],
                color=entry["color"],
            )
        nodes.append(GraphNode(claim=claim, assessment=assessment))
        positions.append(NodePosition(claim_id=claim.id, x=entry["x"], y=entry["y"]))
    edges = tuple(
        SimilarityEdge(
            output_claim_id=e["source"],
            source_claim_id=e["target"],
            similarity=e["similarity"],
        )
        for e in document["edges"]
    )
    doc_ids = (document["doc_ids"]["source"], document["doc_ids"]["output"])
    return ClaimGraph(nodes=tuple(nodes), edges=edges, doc_ids=doc_ids), positions


_SVG_COLORS = {"green": "#2e9e4f", "orange": "#e8962f", "red": "#d23f3f", None: "#8a8f98"}


def render_svg(document: dict, size: int = 640, margin: int = 50) -> str:
    """Static scatter of the graph document for headless use."""
    span = size - 2 * margin

    def px(x: float) -> float:
        return margin + x * span

    def py(y: float) -> float:
        return size - margin - y * span  # similarity axis points up

    tau_nli = document["thresholds"]["tau_nli"]
    tau_sim = document["thresholds"]["tau_sim"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#ffffff"/>',
        f'<rect x="{margin}" y="{margin}" width="{span}" height="{span}" '
        f'fill="none" stroke="#444" stroke-width="1"/>',
        f'<line x1="{px(tau_nli):.2f}" y1="{margin}" x2="{px(tau_nli):.2f}" '
        f'y2="{size - margin}" stroke="#bbb" stroke-dasharray="4 3"/>',
        f'<line x1="{margin}" y1="{py(tau_sim):.2f}" x2="{size - margin}" '
        f'y2="{py(tau_sim):.2f}" stroke="#bbb" stroke-dasharray="4 3"/>',
        f'<text x="{size / 2:.0f}" y="{size - 12}" text-anchor="middle" '
        f'font-size="13">NLI score</text>',
        f'<text x="14" y="{size / 2:.0f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 14 {size / 2:.0f})">avg similarity</text>',
    ]
    pos = {n["id"]: n for n in document["nodes"]}
    for edge in document["edges"]:
        a, b = pos[edge["source"]], pos[edge["target"]]
        width = 0.5 + 2.0 * max(0.0, edge["similarity"])
        parts.append(
            f'<line x1="{px(a["x"]):.2f}" y1="{py(a["y"]):.2f}" x2="{px(b["x"]):.2f}" '
            f'y2="{py(b["y"]):.2f}" stroke="#9aa4b0" stroke-width="{width:.2f}" '
            f'stroke-opacity="0.6"/>'
        )
    for node in document["nodes"]:
        color = _SVG_COLORS[node.get("color")]
        shape = "circle" if node["origin"] == "output" else "rect"
        if shape == "circle":
            parts.append(
                f'<circle cx="{px(node["x"]):.2f}" cy="{py(node["y"]):.2f}" r="8" '
                f'fill="{color}" stroke="#222" stroke-width="0.8"><title>'
                f'{_svg_escape(node["text"])}</title></circle>'
            )
        else:
            parts.append(
                f'<rect x="{px(node["x"]) - 6:.2f}" y="{py(node["y"]) - 6:.2f}" width="12" '
                f'height="12" fill="{color}" stroke="#222" stroke-width="0.8"><title>'
                f'{_svg_escape(node["text"])}</title></rect>'
            )
    parts.append("</svg>")
    return "\n".join(parts)


def _svg_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
