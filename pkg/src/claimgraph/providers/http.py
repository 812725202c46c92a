"""HTTP provider backends.

All endpoints speak JSON over POST with the shape
``{"inputs": [...], "model": ..., "operation": ...}`` -> ``{"outputs": [...]}``;
see docs/provider_http_api.md. Transport failures retry briefly, then raise
TransportError; unparseable payloads raise DecodeError with the raw payload
attached. Triple extraction is the exception: provider misbehavior there is
returned as a failed ExtractionOutcome instead of raised.
"""

from __future__ import annotations

import logging
import time

import requests

from ..errors import DecodeError, TransportError
from .types import (
    EmbeddingVector,
    EntitySpan,
    ExtractionOutcome,
    NLIVerdict,
    ProviderConfig,
    RawTriple,
)
from .stub import normalize_spans

log = logging.getLogger(__name__)

_RETRIES = 2
_BACKOFF_S = 0.2


def _post(cfg: ProviderConfig, operation: str, inputs: list) -> list:
    body = {"inputs": inputs, "model": cfg.model_name, "operation": operation}
    headers = {}
    if cfg.api_key:
        headers["Authorization"] = f"Bearer {cfg.api_key}"
    last_exc: Exception | None = None
    for attempt in range(_RETRIES + 1):
        try:
            resp = requests.post(cfg.endpoint, json=body, timeout=cfg.timeout, headers=headers)
            resp.raise_for_status()
            payload = resp.json()
            break
        except (requests.ConnectionError, requests.Timeout, requests.HTTPError) as exc:
            last_exc = exc
            if attempt < _RETRIES:
                time.sleep(_BACKOFF_S * (attempt + 1))
        except ValueError as exc:  # not JSON
            raise DecodeError(f"non-JSON response from {cfg.endpoint}", payload=resp.text) from exc
    else:
        raise TransportError(f"provider unreachable: {last_exc}", endpoint=cfg.endpoint)
    if not isinstance(payload, dict) or "outputs" not in payload:
        raise DecodeError(f"missing 'outputs' in response from {cfg.endpoint}", payload=payload)
    outputs = payload["outputs"]
    if not isinstance(outputs, list) or len(outputs) != len(inputs):
        raise DecodeError(
            f"expected {len(inputs)} outputs, got {outputs!r:.200}", payload=payload
        )
    return outputs


def http_embed(texts: list[str], cfg: ProviderConfig) -> list[EmbeddingVector]:
    outputs = _post(cfg, "embed", texts)
    vectors = []
    for out in outputs:
        try:
            vectors.append(EmbeddingVector.of(out))
        except (TypeError, ValueError) as exc:
            raise DecodeError(f"bad embedding payload: {exc}", payload=out) from exc
    if len({v.dim for v in vectors}) > 1:
        raise DecodeError("embeddings have inconsistent dimensions", payload=outputs)
    return vectors


def http_nli(premise: str, hypothesis: str, cfg: ProviderConfig) -> NLIVerdict:
    out = _post(cfg, "nli", [{"premise": premise, "hypothesis": hypothesis}])[0]
    # Scalar scorers (consistency-score models) adapt to a full verdict.
    if isinstance(out, (int, float)):
        return NLIVerdict.from_scalar(float(out))
    if isinstance(out, dict):
        try:
            return NLIVerdict.normalized(
                float(out["entail"]), float(out.get("neutral", 0.0)), float(out["contradict"])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"bad NLI payload: {exc}", payload=out) from exc
    raise DecodeError("NLI output must be a scalar or a verdict object", payload=out)


def http_extract(text: str, cfg: ProviderConfig) -> ExtractionOutcome:
    """Never raises for model misbehavior; failures come back as data."""
    try:
        out = _post(cfg, "extract_triples", [text])[0]
        triples = []
        for item in out:
            subj, pred, obj = (str(item[0]).strip(), str(item[1]).strip(), str(item[2]).strip())
            if not (subj and pred and obj):
                raise ValueError(f"empty triple component in {item!r}")
            triples.append(RawTriple(subj, pred, obj))
        return ExtractionOutcome(triples=tuple(triples), failed=False)
    except (TransportError, DecodeError, TypeError, ValueError, IndexError, KeyError) as exc:
        log.warning("triple extraction failed: %s", exc)
        return ExtractionOutcome(triples=(), failed=True, failure_reason=str(exc))


def http_ner(text: str, cfg: ProviderConfig) -> list[EntitySpan]:
    out = _post(cfg, "ner", [text])[0]
    spans = []
    try:
        for item in out:
            spans.append(
                EntitySpan(
                    text=str(item["text"]),
                    label=item["label"],
                    start=int(item["start"]),
                    end=int(item["end"]),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise DecodeError(f"bad NER payload: {exc}", payload=out) from exc
    return normalize_spans(spans, len(text))
