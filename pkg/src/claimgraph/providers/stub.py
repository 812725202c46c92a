"""Deterministic offline provider backends.

Every stub is a pure function of its inputs plus the StubOptions carried
by the config, so pipelines built on them are byte-reproducible in tests
and in CI.
"""

from __future__ import annotations

import hashlib
import re
import time

import numpy as np

from .types import (
    STUB_EMBED_DIM,
    EmbeddingVector,
    EntitySpan,
    ExtractionOutcome,
    NLIVerdict,
    RawTriple,
    StubOptions,
)

#: Verbs recognized by the stub subject-verb-object extractor.
_STUB_VERBS = (
    "founded|acquired|met|opened|closed|leads|led|joined|owns|owned|visited|"
    "launched|bought|sold|hired|built|wrote|published|announced|released|"
    "created|won|lost|signed|left|raised|reported|said|denied|confirmed|"
    "employs|runs|manages|makes|sells"
)

_TRIPLE_RE = re.compile(
    rf"^\s*(?P<subj>[A-Z][\w']*(?:\s+[A-Z][\w']*)*)\s+(?P<pred>{_STUB_VERBS})\s+(?P<obj>.+?)[.!?]?\s*$"
)

_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")

_WORD_RE = re.compile(r"\b[\w']+\b")


def _simulate_latency(opts: StubOptions) -> None:
    if opts.latency_s > 0:
        time.sleep(opts.latency_s)


def stub_embed(text: str, opts: StubOptions) -> EmbeddingVector:
    """Content-hash-seeded pseudo-random unit vector (dim 64)."""
    _simulate_latency(opts)
    seed = int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(STUB_EMBED_DIM)
    vec /= np.linalg.norm(vec)
    return EmbeddingVector.of(vec)


def _apply_antonyms(text: str, antonyms) -> str:
    def sub_word(match: re.Match) -> str:
        return antonyms.get(match.group(0), match.group(0))

    return _WORD_RE.sub(sub_word, text)


def stub_nli(premise: str, hypothesis: str, opts: StubOptions) -> NLIVerdict:
    """Substring -> entail; antonym-substituted premise equals hypothesis
    -> contradict; anything else -> neutral."""
    _simulate_latency(opts)
    premise = premise.strip()
    hypothesis = hypothesis.strip()
    if hypothesis in premise:
        return NLIVerdict(1.0, 0.0, 0.0)
    if _apply_antonyms(premise, opts.antonyms) == hypothesis:
        return NLIVerdict(0.0, 0.0, 1.0)
    return NLIVerdict(0.0, 1.0, 0.0)


def stub_extract(text: str, opts: StubOptions) -> ExtractionOutcome:
    """Pattern-table SVO extraction over sentences; supports failure injection."""
    _simulate_latency(opts)
    if opts.fail_extraction:
        return ExtractionOutcome(triples=(), failed=True, failure_reason=opts.failure_reason)
    triples = []
    for sentence in _SENTENCE_SPLIT_RE.split(text):
        match = _TRIPLE_RE.match(sentence)
        if match:
            triples.append(
                RawTriple(
                    subject=match.group("subj").strip(),
                    predicate=match.group("pred").strip(),
                    object=match.group("obj").strip(),
                )
            )
    return ExtractionOutcome(triples=tuple(triples), failed=False)


def stub_ner(text: str, opts: StubOptions) -> list[EntitySpan]:
    """Gazetteer lookup: every occurrence of a known surface form becomes a span."""
    _simulate_latency(opts)
    spans = []
    for surface, label in opts.gazetteer.items():
        for match in re.finditer(rf"\b{re.escape(surface)}\b", text):
            spans.append(EntitySpan(text=match.group(0), label=label,  # type: ignore[arg-type]
                                    start=match.start(), end=match.end()))
    return normalize_spans(spans, len(text))


def normalize_spans(spans: list[EntitySpan], text_length: int) -> list[EntitySpan]:
    """Drop out-of-range spans and resolve overlaps longest-span-wins.

    Ties break deterministically: earlier start, then label, then text.
    Result is sorted by start offset and non-overlapping.
    """
    candidates = [s for s in spans if s.end <= text_length]
    candidates.sort(key=lambda s: (-(s.end - s.start), s.start, s.label, s.text))
    kept: list[EntitySpan] = []
    for span in candidates:
        if all(span.end <= k.start or span.start >= k.end for k in kept):
            kept.append(span)
    kept.sort(key=lambda s: s.start)
    return kept
