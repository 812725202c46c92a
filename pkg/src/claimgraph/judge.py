"""Score output claims against their matched sources with NLI and fold
claim judgments into a response verdict.

A claim counts as supported if any closely matched source claim entails
it (max aggregation); a response is only as good as its worst claim (min
aggregation), and any triple-extraction failure forces the hallucinated
label with score zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean
from typing import Literal, Mapping

from .decompose import Claim
from .errors import ClaimGraphError, InputError, JudgmentError
from .match import MatchSet
from .providers import NLIVerdict, ProviderSet, nli_score

Label = Literal["consistent", "hallucinated"]
Aggregation = Literal["max_entail", "mean_entail"]


@dataclass(frozen=True)
class ClaimJudgment:
    claim_id: str
    nli_score: float
    per_edge: tuple[tuple[str, NLIVerdict], ...]  # aligned 1:1 with the MatchSet
    avg_similarity: float


@dataclass(frozen=True)
class ResponseVerdict:
    response_score: float
    label: Label
    failure_forced: bool
    threshold: float


def judge_claim(
    claim: Claim,
    matchset: MatchSet,
    providers: ProviderSet,
    aggregation: Aggregation = "max_entail",
    source_texts: Mapping[str, str] | None = None,
) -> ClaimJudgment:
    """NLI-score one claim against each matched source claim.

    ``source_texts`` maps source claim ids to their texts (premises); the
    hypothesis is always the claim's own text (for sentence claims that is
    the windowed text chosen at decomposition).
    """
    if matchset.output_claim_id != claim.id:
        raise InputError(f"matchset {matchset.output_claim_id} does not belong to {claim.id}")
    if not matchset.edges:
        raise InputError(f"claim {claim.id} has an empty matchset")
    if source_texts is None:
        raise InputError("source_texts mapping is required")

    per_edge = []
    for edge in matchset.edges:
        try:
            premise = source_texts[edge.source_claim_id]
        except KeyError:
            raise InputError(f"unknown source claim {edge.source_claim_id}") from None
        try:
            verdict = nli_score(premise, claim.text, providers.nli)
        except ClaimGraphError as exc:
            raise JudgmentError(f"NLI failed for claim {claim.id}: {exc}",
                                claim_id=claim.id) from exc
        per_edge.append((edge.source_claim_id, verdict))

    entails = [v.entail for _, v in per_edge]
    score = max(entails) if aggregation == "max_entail" else fmean(entails)
    return ClaimJudgment(
        claim_id=claim.id,
        nli_score=score,
        per_edge=tuple(per_edge),
        avg_similarity=matchset.avg_similarity,
    )


def judge_response(
    judgments: list[ClaimJudgment],
    extraction_failed: bool,
    threshold: float,
) -> ResponseVerdict:
    """Fold claim judgments into one verdict; extraction failure forces
    (0, hallucinated) regardless of judgments."""
    if not (0.0 < threshold < 1.0):
        raise InputError(f"threshold must be in (0, 1), got {threshold}")
    if extraction_failed:
        return ResponseVerdict(0.0, "hallucinated", failure_forced=True, threshold=threshold)
    if not judgments:
        raise InputError("no judgments and no extraction failure")
    score = min(j.nli_score for j in judgments)
    label: Label = "consistent" if score >= threshold else "hallucinated"
    return ResponseVerdict(score, label, failure_forced=False, threshold=threshold)
