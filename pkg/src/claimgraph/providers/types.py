"""Value types exchanged with model providers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Mapping

from ..errors import ConfigError, DecodeError

ProviderKind = Literal["stub", "http_llm", "local_model"]

#: Dimension of the deterministic stub embedding space.
STUB_EMBED_DIM = 64

#: Default antonym table used by the stub NLI scorer. Symmetric on purpose:
#: substituting either member of a pair flags a contradiction.
DEFAULT_ANTONYMS: Mapping[str, str] = {
    "opened": "closed",
    "closed": "opened",
    "increased": "decreased",
    "decreased": "increased",
    "rose": "fell",
    "fell": "rose",
    "won": "lost",
    "lost": "won",
    "before": "after",
    "after": "before",
    "above": "below",
    "below": "above",
    "alive": "dead",
    "dead": "alive",
}


@dataclass(frozen=True)
class EmbeddingVector:
    """Fixed-length real vector; ``dim`` must equal ``len(values)``."""

    values: tuple[float, ...]
    dim: int

    def __post_init__(self) -> None:
        if len(self.values) != self.dim or self.dim <= 0:
            raise ValueError(f"embedding dim mismatch: {len(self.values)} != {self.dim}")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("embedding contains non-finite values")

    @classmethod
    def of(cls, values) -> "EmbeddingVector":
        vals = tuple(float(v) for v in values)
        return cls(values=vals, dim=len(vals))


@dataclass(frozen=True)
class NLIVerdict:
    """Class probabilities for one premise/hypothesis pair (sum to 1)."""

    entail: float
    neutral: float
    contradict: float

    def __post_init__(self) -> None:
        for name, v in (("entail", self.entail), ("neutral", self.neutral),
                        ("contradict", self.contradict)):
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"NLI component {name}={v} outside [0, 1]")
        total = self.entail + self.neutral + self.contradict
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"NLI components sum to {total}, expected 1")

    @classmethod
    def normalized(cls, entail: float, neutral: float, contradict: float) -> "NLIVerdict":
        """Build a verdict from raw backend scores, rescaling to sum 1."""
        parts = (entail, neutral, contradict)
        if any(not math.isfinite(p) or p < 0 for p in parts):
            raise DecodeError(f"invalid NLI scores {parts}", payload=parts)
        total = sum(parts)
        if total <= 0:
            raise DecodeError(f"NLI scores sum to {total}", payload=parts)
        return cls(entail / total, neutral / total, contradict / total)

    @classmethod
    def from_scalar(cls, score: float) -> "NLIVerdict":
        """Adapt a scalar consistency score: entail=score, contradict=1-score."""
        if not math.isfinite(score):
            raise DecodeError(f"non-finite scalar NLI score {score}", payload=score)
        score = min(1.0, max(0.0, float(score)))
        return cls(entail=score, neutral=0.0, contradict=1.0 - score)


@dataclass(frozen=True)
class RawTriple:
    subject: str
    predicate: str
    object: str


@dataclass(frozen=True)
class ExtractionOutcome:
    """Result of LLM triple extraction. Failure is data, never an exception."""

    triples: tuple[RawTriple, ...]
    failed: bool
    failure_reason: str = ""

    def __post_init__(self) -> None:
        if self.failed and self.triples:
            raise ValueError("failed extraction must carry no triples")
        if not self.failed and self.failure_reason:
            raise ValueError("successful extraction must carry no failure reason")


@dataclass(frozen=True)
class EntitySpan:
    """Named-entity mention with character offsets into its source text."""

    text: str
    label: Literal["person", "org", "location", "misc"]
    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid entity span ({self.start}, {self.end})")


@dataclass(frozen=True)
class StubOptions:
    """Knobs for the deterministic stub providers (test fixtures only).

    ``gazetteer`` maps entity surface forms to labels for the stub NER.
    ``fail_extraction`` injects an extraction failure.  ``latency_s``
    simulates per-call model latency so cache-speedup tests are meaningful.
    """

    antonyms: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_ANTONYMS))
    gazetteer: Mapping[str, str] = field(default_factory=dict)
    fail_extraction: bool = False
    failure_reason: str = "injected"
    latency_s: float = 0.0


@dataclass(frozen=True)
class ProviderConfig:
    """How to reach one model capability (or its offline stub)."""

    kind: ProviderKind = "stub"
    endpoint: str = ""
    model_name: str = "stub"
    cache_dir: str = ""
    timeout: float = 30.0
    api_key: str = ""
    stub: StubOptions = field(default_factory=StubOptions)

    def __post_init__(self) -> None:
        if self.kind == "http_llm" and not self.endpoint:
            raise ConfigError("http_llm provider requires a non-empty endpoint")
