"""End-to-end orchestration: one source/output pair in, one graph document out.

Used by the CLI ``audit`` command, the HTTP service, and the evaluation
harness so all three agree on semantics. A triple-extraction failure on
either side (or a decomposition that yields no checkable claims) forces
the hallucinated verdict with score zero instead of erroring, mirroring
the judge's failure policy.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .decompose import Claim, DecomposeConfig, decompose
from .graph import (
    ClaimGraph,
    LayoutConfig,
    NodePosition,
    SCHEMA_VERSION,
    build_graph,
    export_graph_json,
    layout,
)
from .judge import (
    Aggregation,
    ClaimJudgment,
    ResponseVerdict,
    judge_claim,
    judge_response,
)
from .match import MatchSet, match_claims
from .providers import ProviderSet
from .score import (
    ClaimAssessment,
    ColorBands,
    ConfidenceWeights,
    QuadrantThresholds,
    ResponseMetrics,
    assess_claim,
    response_metrics,
)


@dataclass(frozen=True)
class PipelineConfig:
    strategy: str = "sici"
    window_radius: int = 0
    coref: bool = True
    k: int = 3
    aggregation: Aggregation = "max_entail"
    threshold: float = 0.5
    weights: ConfidenceWeights = field(default_factory=ConfidenceWeights)
    quadrants: QuadrantThresholds = field(default_factory=QuadrantThresholds)
    bands: ColorBands = field(default_factory=ColorBands)
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    include_unreferenced: bool = False

    def decompose_config(self) -> DecomposeConfig:
        return DecomposeConfig(strategy=self.strategy, window_radius=self.window_radius,
                               coref=self.coref)


@dataclass(frozen=True)
class AuditOutcome:
    source_claims: list[Claim]
    output_claims: list[Claim]
    extraction_failed: bool
    matchsets: list[MatchSet]
    judgments: list[ClaimJudgment]
    assessments: list[ClaimAssessment]
    metrics: ResponseMetrics | None
    verdict: ResponseVerdict
    graph: ClaimGraph | None
    positions: list[NodePosition]
    document: dict


def _doc_id(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def _empty_document(verdict: ResponseVerdict, cfg: PipelineConfig,
                    doc_ids: tuple[str, str], reason: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "doc_ids": {"source": doc_ids[0], "output": doc_ids[1]},
        "nodes": [],
        "edges": [],
        "response": {
            "avg_nli": None, "avg_sim": None, "combined": None,
            "score": verdict.response_score, "label": verdict.label,
            "failure_forced": verdict.failure_forced, "threshold": verdict.threshold,
            "note": reason,
        },
        "thresholds": {"tau_nli": cfg.quadrants.tau_nli, "tau_sim": cfg.quadrants.tau_sim},
        "legend": {"green_min": cfg.bands.green_min, "orange_min": cfg.bands.orange_min},
        "weights": {"w_nli": cfg.weights.w_nli, "w_sim": cfg.weights.w_sim},
    }


def run_audit(
    source_text: str,
    output_text: str,
    cfg: PipelineConfig,
    providers: ProviderSet,
) -> AuditOutcome:
    doc_ids = (_doc_id(source_text), _doc_id(output_text))
    dcfg = cfg.decompose_config()
    source_claims, src_failed = decompose(source_text, "source", dcfg, providers)
    output_claims, out_failed = decompose(output_text, "output", dcfg, providers)

    extraction_failed = src_failed or out_failed
    no_claims = not extraction_failed and (not source_claims or not output_claims)
    if extraction_failed or no_claims:
        verdict = judge_response([], extraction_failed=True, threshold=cfg.threshold)
        reason = "extraction failed" if extraction_failed else "no checkable claims"
        return AuditOutcome(
            source_claims=source_claims, output_claims=output_claims,
            extraction_failed=True, matchsets=[], judgments=[], assessments=[],
            metrics=None, verdict=verdict, graph=None, positions=[],
            document=_empty_document(verdict, cfg, doc_ids, reason),
        )

    matchsets = match_claims(output_claims, source_claims, cfg.k, providers)
    source_texts = {c.id: c.text for c in source_claims}
    judgments = [
        judge_claim(claim, mset, providers, cfg.aggregation, source_texts)
        for claim, mset in zip(output_claims, matchsets)
    ]
    assessments = [assess_claim(j, cfg.weights, cfg.quadrants, cfg.bands) for j in judgments]
    verdict = judge_response(judgments, extraction_failed=False, threshold=cfg.threshold)
    metrics = response_metrics(assessments, cfg.weights)

    graph = build_graph(
        source_claims + output_claims, matchsets, assessments,
        include_unreferenced=cfg.include_unreferenced, doc_ids=doc_ids,
    )
    positions = layout(graph, cfg.layout)
    edge_verdicts = {
        (j.claim_id, source_id): {"entail": v.entail, "neutral": v.neutral,
                                  "contradict": v.contradict}
        for j in judgments
        for source_id, v in j.per_edge
    }
    document = export_graph_json(
        graph, positions, metrics, verdict=verdict, thresholds=cfg.quadrants,
        bands=cfg.bands, weights=cfg.weights, edge_verdicts=edge_verdicts,
    )
    return AuditOutcome(
        source_claims=source_claims, output_claims=output_claims,
        extraction_failed=False, matchsets=matchsets, judgments=judgments,
        assessments=assessments, metrics=metrics, verdict=verdict,
        graph=graph, positions=positions, document=document,
    )


def score_pair(
    source_text: str,
    output_text: str,
    cfg: PipelineConfig,
    providers: ProviderSet,
) -> tuple[float, bool]:
    """Lightweight scoring path for batch evaluation: no layout, no export.

    Returns (response_score, failure_forced).
    """
    dcfg = cfg.decompose_config()
    source_claims, src_failed = decompose(source_text, "source", dcfg, providers)
    output_claims, out_failed = decompose(output_text, "output", dcfg, providers)
    if src_failed or out_failed or not source_claims or not output_claims:
        return 0.0, True
    matchsets = match_claims(output_claims, source_claims, cfg.k, providers)
    source_texts = {c.id: c.text for c in source_claims}
    judgments = [
        judge_claim(claim, mset, providers, cfg.aggregation, source_texts)
        for claim, mset in zip(output_claims, matchsets)
    ]
    return min(j.nli_score for j in judgments), False
