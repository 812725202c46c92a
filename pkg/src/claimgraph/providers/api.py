"""Uniform entry points for the four model capabilities.

``embed_texts`` / ``nli_score`` / ``extract_triples_llm`` / ``ner_entities``
dispatch on ProviderConfig.kind and transparently consult the response
cache when ``cache_dir`` is set.  Embedding results are cached per text so
growing a batch never invalidates earlier work; failed extractions are
never cached (transient outages must not become permanent observations).

Backend invocations are counted per (kind, operation) for diagnostics and
cache-efficacy tests; cache hits do not count.
"""

from __future__ import annotations

import os
import re
import threading
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable

from ..errors import ConfigError, InputError
from . import http, stub
from .cache import ResponseCache, cache_key
from .types import (
    EmbeddingVector,
    EntitySpan,
    ExtractionOutcome,
    NLIVerdict,
    ProviderConfig,
    RawTriple,
    StubOptions,
)

_WORD_CHAR_RE = re.compile(r"\w")

_counts_lock = threading.Lock()
_call_counts: Counter = Counter()

# Hooks for in-process model backends, keyed (model_name, operation).
_local_backends: dict[tuple[str, str], Callable] = {}


def register_local_backend(model_name: str, operation: str, fn: Callable) -> None:
    """Register an in-process backend for kind='local_model' configs."""
    _local_backends[(model_name, operation)] = fn


def _local(cfg: ProviderConfig, operation: str) -> Callable:
    try:
        return _local_backends[(cfg.model_name, operation)]
    except KeyError:
        raise ConfigError(
            f"no local backend registered for model={cfg.model_name!r} op={operation!r}"
        ) from None


def _count(cfg: ProviderConfig, operation: str, n: int = 1) -> None:
    with _counts_lock:
        _call_counts[f"{cfg.kind}:{operation}"] += n


def provider_calls(operation: str | None = None) -> int:
    """Total backend invocations since the last reset (cache hits excluded)."""
    with _counts_lock:
        if operation is None:
            return sum(_call_counts.values())
        return sum(v for k, v in _call_counts.items() if k.endswith(f":{operation}"))


def reset_provider_calls() -> None:
    with _counts_lock:
        _call_counts.clear()


def _cache_for(cfg: ProviderConfig) -> ResponseCache | None:
    return ResponseCache(cfg.cache_dir) if cfg.cache_dir else None


def embed_texts(texts: list[str], cfg: ProviderConfig) -> list[EmbeddingVector]:
    """Embed a batch of texts; one vector per input, all the same dimension."""
    if not texts:
        raise InputError("embed_texts requires at least one text")
    for i, text in enumerate(texts):
        if not text.strip():
            raise InputError(f"text at index {i} is empty")

    cache = _cache_for(cfg)
    keys = [cache_key(cfg.kind, cfg.model_name, "embed", t) for t in texts]
    results: dict[int, EmbeddingVector] = {}
    if cache is not None:
        for i, key in enumerate(keys):
            hit = cache.get(key)
            if hit is not None:
                results[i] = EmbeddingVector.of(hit)
    missing = [i for i in range(len(texts)) if i not in results]

    if missing:
        # Dedupe within the batch: each distinct text costs one invocation.
        unique_texts = list(dict.fromkeys(texts[i] for i in missing))
        _count(cfg, "embed", len(unique_texts))
        if cfg.kind == "stub":
            fresh = [stub.stub_embed(t, cfg.stub) for t in unique_texts]
        elif cfg.kind == "http_llm":
            fresh = http.http_embed(unique_texts, cfg)
        else:
            fresh = [EmbeddingVector.of(v) for v in _local(cfg, "embed")(unique_texts)]
        by_text = dict(zip(unique_texts, fresh))
        for i in missing:
            vec = by_text[texts[i]]
            results[i] = vec
            if cache is not None:
                cache.put(keys[i], list(vec.values))

    vectors = [results[i] for i in range(len(texts))]
    if len({v.dim for v in vectors}) > 1:
        raise InputError("provider returned embeddings of mixed dimension")
    return vectors


def nli_score(premise: str, hypothesis: str, cfg: ProviderConfig) -> NLIVerdict:
    if not premise.strip() or not hypothesis.strip():
        raise InputError("nli_score requires non-empty premise and hypothesis")

    cache = _cache_for(cfg)
    key = cache_key(cfg.kind, cfg.model_name, "nli", {"premise": premise, "hypothesis": hypothesis})
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return NLIVerdict(hit["entail"], hit["neutral"], hit["contradict"])

    _count(cfg, "nli")
    if cfg.kind == "stub":
        verdict = stub.stub_nli(premise, hypothesis, cfg.stub)
    elif cfg.kind == "http_llm":
        verdict = http.http_nli(premise, hypothesis, cfg)
    else:
        raw = _local(cfg, "nli")(premise, hypothesis)
        verdict = NLIVerdict.from_scalar(raw) if isinstance(raw, (int, float)) else raw

    if cache is not None:
        cache.put(key, {"entail": verdict.entail, "neutral": verdict.neutral,
                        "contradict": verdict.contradict})
    return verdict


def extract_triples_llm(text: str, cfg: ProviderConfig) -> ExtractionOutcome:
    """Triple extraction; model misbehavior returns failed=True, never raises."""
    if not _WORD_CHAR_RE.search(text):
        raise InputError("extract_triples_llm requires text with actual content")

    cache = _cache_for(cfg)
    key = cache_key(cfg.kind, cfg.model_name, "extract_triples", text)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return ExtractionOutcome(
                triples=tuple(RawTriple(*t) for t in hit["triples"]),
                failed=hit["failed"],
                failure_reason=hit.get("failure_reason", ""),
            )

    _count(cfg, "extract_triples")
    if cfg.kind == "stub":
        outcome = stub.stub_extract(text, cfg.stub)
    elif cfg.kind == "http_llm":
        outcome = http.http_extract(text, cfg)
    else:
        outcome = _local(cfg, "extract_triples")(text)

    if cache is not None and not outcome.failed:
        cache.put(key, {
            "triples": [[t.subject, t.predicate, t.object] for t in outcome.triples],
            "failed": False,
        })
    return outcome


def ner_entities(text: str, cfg: ProviderConfig) -> list[EntitySpan]:
    if not text.strip():
        raise InputError("ner_entities requires non-empty text")

    cache = _cache_for(cfg)
    key = cache_key(cfg.kind, cfg.model_name, "ner", text)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return [EntitySpan(text=s[0], label=s[1], start=s[2], end=s[3]) for s in hit]

    _count(cfg, "ner")
    if cfg.kind == "stub":
        spans = stub.stub_ner(text, cfg.stub)
    elif cfg.kind == "http_llm":
        spans = http.http_ner(text, cfg)
    else:
        spans = stub.normalize_spans(_local(cfg, "ner")(text), len(text))

    if cache is not None:
        cache.put(key, [[s.text, s.label, s.start, s.end] for s in spans])
    return spans


@dataclass(frozen=True)
class ProviderSet:
    """One config per capability; the unit the pipeline passes around."""

    embedding: ProviderConfig = field(default_factory=ProviderConfig)
    nli: ProviderConfig = field(default_factory=ProviderConfig)
    extraction: ProviderConfig = field(default_factory=ProviderConfig)
    ner: ProviderConfig = field(default_factory=ProviderConfig)

    @classmethod
    def stubs(cls, cache_dir: str = "", stub_options: StubOptions | None = None) -> "ProviderSet":
        opts = stub_options or StubOptions()
        cfg = ProviderConfig(kind="stub", cache_dir=cache_dir, stub=opts)
        return cls(embedding=cfg, nli=cfg, extraction=cfg, ner=cfg)

    @classmethod
    def from_env(cls, stub_options: StubOptions | None = None) -> "ProviderSet":
        """Honor AUDIT_LLM_ENDPOINT / AUDIT_LLM_API_KEY / AUDIT_NLI_ENDPOINT /
        AUDIT_CACHE_DIR; capabilities without an endpoint fall back to stubs."""
        cache_dir = os.environ.get("AUDIT_CACHE_DIR", "")
        base = cls.stubs(cache_dir=cache_dir, stub_options=stub_options)
        llm_endpoint = os.environ.get("AUDIT_LLM_ENDPOINT", "")
        nli_endpoint = os.environ.get("AUDIT_NLI_ENDPOINT", "")
        api_key = os.environ.get("AUDIT_LLM_API_KEY", "")
        out = base
        if llm_endpoint:
            out = replace(out, extraction=ProviderConfig(
                kind="http_llm", endpoint=llm_endpoint, model_name="llm",
                cache_dir=cache_dir, api_key=api_key))
        if nli_endpoint:
            out = replace(out, nli=ProviderConfig(
                kind="http_llm", endpoint=nli_endpoint, model_name="nli",
                cache_dir=cache_dir))
        return out

    def with_cache(self, cache_dir: str) -> "ProviderSet":
        return ProviderSet(
            embedding=replace(self.embedding, cache_dir=cache_dir),
            nli=replace(self.nli, cache_dir=cache_dir),
            extraction=replace(self.extraction, cache_dir=cache_dir),
            ner=replace(self.ner, cache_dir=cache_dir),
        )
