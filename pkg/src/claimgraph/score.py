"""Per-claim confidence, quadrant classification, and reliability colors.

Confidence blends NLI and similarity three-to-one; the (NLI, similarity)
plane splits into four quadrants at configurable thresholds, with
boundary ties resolving upward.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean
from typing import Literal

from .errors import InputError
from .judge import ClaimJudgment

Quadrant = Literal[
    "HighReliability", "SuspiciousContent", "PlausibleButUnsupported", "PotentialHallucination"
]
Color = Literal["green", "orange", "red"]


@dataclass(frozen=True)
class ConfidenceWeights:
    w_nli: float = 0.75
    w_sim: float = 0.25

    def __post_init__(self) -> None:
        if self.w_nli < 0 or self.w_sim < 0 or abs(self.w_nli + self.w_sim - 1.0) > 1e-9:
            raise InputError(f"weights must be non-negative and sum to 1, got "
                             f"({self.w_nli}, {self.w_sim})")


@dataclass(frozen=True)
class QuadrantThresholds:
    tau_nli: float = 0.5
    tau_sim: float = 0.5

    def __post_init__(self) -> None:
        if not (0.0 < self.tau_nli < 1.0 and 0.0 < self.tau_sim < 1.0):
            raise InputError(f"thresholds must lie strictly inside (0, 1), got "
                             f"({self.tau_nli}, {self.tau_sim})")


@dataclass(frozen=True)
class ColorBands:
    green_min: float = 0.75
    orange_min: float = 0.5

    def __post_init__(self) -> None:
        if not (0.0 < self.orange_min < self.green_min <= 1.0):
            raise InputError(f"bands must satisfy 0 < orange_min < green_min <= 1, got "
                             f"({self.green_min}, {self.orange_min})")


@dataclass(frozen=True)
class ClaimAssessment:
    claim_id: str
    nli: float
    avg_sim: float
    confidence: float
    quadrant: Quadrant
    color: Color


def _check_unit(value: float, name: str) -> float:
    if not (0.0 <= value <= 1.0):
        raise InputError(f"{name} must be in [0, 1], got {value}")
    return value


def confidence(nli: float, avg_sim: float, w: ConfidenceWeights = ConfidenceWeights()) -> float:
    _check_unit(nli, "nli")
    _check_unit(avg_sim, "avg_sim")
    return w.w_nli * nli + w.w_sim * avg_sim


def classify_quadrant(
    nli: float, avg_sim: float, t: QuadrantThresholds = QuadrantThresholds()
) -> Quadrant:
    _check_unit(nli, "nli")
    _check_unit(avg_sim, "avg_sim")
    if nli >= t.tau_nli:
        return "HighReliability" if avg_sim >= t.tau_sim else "PlausibleButUnsupported"
    return "SuspiciousContent" if avg_sim >= t.tau_sim else "PotentialHallucination"


def assign_color(conf: float, bands: ColorBands = ColorBands()) -> Color:
    _check_unit(conf, "confidence")
    if conf >= bands.green_min:
        return "green"
    if conf >= bands.orange_min:
        return "orange"
    return "red"


def assess_claim(
    judgment: ClaimJudgment,
    w: ConfidenceWeights = ConfidenceWeights(),
    t: QuadrantThresholds = QuadrantThresholds(),
    bands: ColorBands = ColorBands(),
) -> ClaimAssessment:
    conf = confidence(judgment.nli_score, judgment.avg_similarity, w)
    return ClaimAssessment(
        claim_id=judgment.claim_id,
        nli=judgment.nli_score,
        avg_sim=judgment.avg_similarity,
        confidence=conf,
        quadrant=classify_quadrant(judgment.nli_score, judgment.avg_similarity, t),
        color=assign_color(conf, bands),
    )


@dataclass(frozen=True)
class ResponseMetrics:
    avg_nli: float
    avg_sim: float
    combined: float


def response_metrics(
    assessments: list[ClaimAssessment], w: ConfidenceWeights = ConfidenceWeights()
) -> ResponseMetrics:
    """Response-level summary; by linearity ``combined`` equals the mean of
    the per-claim confidences."""
    if not assessments:
        raise InputError("no assessments to summarize")
    avg_nli = fmean(a.nli for a in assessments)
    avg_sim = fmean(a.avg_sim for a in assessments)
    return ResponseMetrics(avg_nli=avg_nli, avg_sim=avg_sim,
                           combined=w.w_nli * avg_nli + w.w_sim * avg_sim)
