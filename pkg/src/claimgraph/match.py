"""Connect each output claim to its most similar source claims.

Matching is exhaustive cosine similarity over stub or model embeddings;
claim counts are tens, not millions, so exactness beats approximate
neighbor search and keeps oracle tests meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean

import numpy as np

from .decompose import Claim
from .errors import InputError, NumericError
from .providers import EmbeddingVector, ProviderSet, embed_texts


@dataclass(frozen=True)
class SimilarityEdge:
    output_claim_id: str
    source_claim_id: str
    similarity: float  # raw cosine in [-1, 1]

    @property
    def sim01(self) -> float:
        """Similarity clamped to [0, 1]; anticorrelation carries no support."""
        return max(0.0, self.similarity)


@dataclass(frozen=True)
class MatchSet:
    output_claim_id: str
    edges: tuple[SimilarityEdge, ...]
    k: int

    @property
    def avg_similarity(self) -> float:
        return fmean(e.sim01 for e in self.edges)


def cosine_similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: {a.dim} != {b.dim}")
    va = np.asarray(a.values)
    vb = np.asarray(b.values)
    norm_a = float(np.linalg.norm(va))
    norm_b = float(np.linalg.norm(vb))
    if norm_a == 0.0:
        raise NumericError("first vector has zero norm")
    if norm_b == 0.0:
        raise NumericError("second vector has zero norm")
    sim = float(np.dot(va, vb) / (norm_a * norm_b))
    if not math.isfinite(sim):
        raise NumericError(f"cosine similarity is not finite: {sim}")
    return max(-1.0, min(1.0, sim))


def match_claims(
    output_claims: list[Claim],
    source_claims: list[Claim],
    k: int,
    providers: ProviderSet,
) -> list[MatchSet]:
    """Exact top-k source matches per output claim, ties broken by ascending
    source claim id."""
    if not output_claims:
        raise InputError("no output claims to match")
    if not source_claims:
        raise InputError("no source claims to match against")
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")

    out_vecs = embed_texts([c.text for c in output_claims], providers.embedding)
    src_vecs = embed_texts([c.text for c in source_claims], providers.embedding)

    matchsets = []
    for claim, vec in zip(output_claims, out_vecs):
        scored = [
            (cosine_similarity(vec, src_vec), src.id)
            for src, src_vec in zip(source_claims, src_vecs)
        ]
        scored.sort(key=lambda pair: (-pair[0], pair[1]))
        edges = tuple(
            SimilarityEdge(output_claim_id=claim.id, source_claim_id=src_id, similarity=sim)
            for sim, src_id in scored[: min(k, len(scored))]
        )
        matchsets.append(MatchSet(output_claim_id=claim.id, edges=edges, k=k))
    return matchsets
