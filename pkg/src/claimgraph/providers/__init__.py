"""Pluggable model providers: embeddings, NLI, triple extraction, NER."""

from .api import (
    ProviderSet,
    embed_texts,
    extract_triples_llm,
    ner_entities,
    nli_score,
    provider_calls,
    register_local_backend,
    reset_provider_calls,
)
from .cache import ResponseCache, cache_key
from .stub import normalize_spans
from .types import (
    DEFAULT_ANTONYMS,
    STUB_EMBED_DIM,
    EmbeddingVector,
    EntitySpan,
    ExtractionOutcome,
    NLIVerdict,
    ProviderConfig,
    RawTriple,
    StubOptions,
)

__all__ = [
    "DEFAULT_ANTONYMS",
    "STUB_EMBED_DIM",
    "EmbeddingVector",
    "EntitySpan",
    "ExtractionOutcome",
    "NLIVerdict",
    "ProviderConfig",
    "ProviderSet",
    "RawTriple",
    "ResponseCache",
    "StubOptions",
    "cache_key",
    "embed_texts",
    "extract_triples_llm",
    "ner_entities",
    "nli_score",
    "normalize_spans",
    "provider_calls",
    "register_local_backend",
    "reset_provider_calls",
]
