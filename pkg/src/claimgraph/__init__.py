"""claimgraph: factual-consistency auditing for LLM outputs.

Decomposes a source/output pair into checkable claims, links each output
claim to its most similar source claims, scores the links with natural
language inference, classifies claims into reliability quadrants, and
lays the result out as an anchored claim graph for human review.
"""

__version__ = "0.1.0"

from .decompose import Claim, DecomposeConfig, SentenceUnit
from .graph import ClaimGraph, LayoutConfig, NodePosition
from .judge import ClaimJudgment, ResponseVerdict
from .match import MatchSet, SimilarityEdge
from .pipeline import AuditOutcome, PipelineConfig, run_audit, score_pair
from .providers import ProviderSet
from .score import ClaimAssessment, ColorBands, ConfidenceWeights, QuadrantThresholds

__all__ = [
    "AuditOutcome",
    "Claim",
    "ClaimAssessment",
    "ClaimGraph",
    "ClaimJudgment",
    "ColorBands",
    "ConfidenceWeights",
    "DecomposeConfig",
    "LayoutConfig",
    "MatchSet",
    "NodePosition",
    "PipelineConfig",
    "ProviderSet",
    "QuadrantThresholds",
    "ResponseVerdict",
    "SentenceUnit",
    "SimilarityEdge",
    "run_audit",
    "score_pair",
    "__version__",
]
