"""Turn raw documents into checkable claims.

Two strategies: ``triples`` sends the document through LLM triple
extraction and renders each triple as "subject predicate object" text;
``sici`` isolates sentences, substitutes pronouns with their nearest
preceding compatible entity, and widens each sentence by a configurable
context window (radius 0 keeps the sentence alone; windows only apply to
the model-output side, the source side stays at sentence granularity).
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, replace
from typing import Literal

from .errors import InputError
from .providers import EntitySpan, ProviderSet, RawTriple, extract_triples_llm, ner_entities

Origin = Literal["source", "output"]
ClaimKind = Literal["triple", "sentence"]

#: Abbreviations that never terminate a sentence.
ABBREVIATIONS = frozenset({
    "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Sr.", "Jr.", "St.", "Mt.",
    "Capt.", "Col.", "Gen.", "Lt.", "Sgt.", "Rep.", "Sen.", "Gov.",
    "U.S.", "U.K.", "U.N.", "E.U.", "a.m.", "p.m.", "e.g.", "i.e.",
    "etc.", "vs.", "Inc.", "Ltd.", "Corp.", "Co.", "No.", "Fig.",
    "Jan.", "Feb.", "Mar.", "Apr.", "Jun.", "Jul.", "Aug.", "Sep.",
    "Sept.", "Oct.", "Nov.", "Dec.", "approx.", "est.",
})

# Terminal punctuation run, optional closing quotes/brackets, then the
# whitespace that separates sentences (or end of text).
_BOUNDARY_RE = re.compile(r"[.!?]+[\"'”’)\]]*(?=\s|$)")

_PERSON_PRONOUNS = frozenset({"he", "she", "him", "her", "his", "hers"})
_THING_PRONOUNS = frozenset({"it", "its"})
_ANY_PRONOUNS = frozenset({"they", "them", "their"})
_PRONOUN_RE = re.compile(
    r"\b(he|she|it|they|him|her|them|his|hers|its|their)\b(?!['’])", re.IGNORECASE
)

_MAX_WINDOW_RADIUS = 3


@dataclass(frozen=True)
class SentenceUnit:
    """One sentence with its progressive rewrites and document offsets."""

    index: int
    raw_text: str
    resolved_text: str
    window_text: str
    start: int
    end: int


@dataclass(frozen=True)
class DecomposeConfig:
    strategy: Literal["triples", "sici"] = "sici"
    window_radius: int = 0
    coref: bool = True

    def __post_init__(self) -> None:
        if not (0 <= self.window_radius <= _MAX_WINDOW_RADIUS):
            raise InputError(
                f"window_radius must be in [0, {_MAX_WINDOW_RADIUS}], got {self.window_radius}"
            )


@dataclass(frozen=True)
class Claim:
    """Atomic checkable unit with provenance back into its document."""

    id: str
    text: str
    kind: ClaimKind
    origin: Origin
    span: tuple[int, int]
    triple: RawTriple | None = None
    sentence_index: int | None = None

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("claim text must be non-empty")
        if (self.kind == "triple") != (self.triple is not None):
            raise ValueError("triple payload present iff kind == 'triple'")

    def to_json(self) -> dict:
        doc = {
            "id": self.id,
            "text": self.text,
            "kind": self.kind,
            "origin": self.origin,
            "span": [self.span[0], self.span[1]],
        }
        if self.triple is not None:
            doc["triple"] = [self.triple.subject, self.triple.predicate, self.triple.object]
        if self.sentence_index is not None:
            doc["sentence_index"] = self.sentence_index
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Claim":
        triple = doc.get("triple")
        return cls(
            id=doc["id"],
            text=doc["text"],
            kind=doc["kind"],
            origin=doc["origin"],
            span=(doc["span"][0], doc["span"][1]),
            triple=RawTriple(*triple) if triple else None,
            sentence_index=doc.get("sentence_index"),
        )


def split_sentences(document: str) -> list[SentenceUnit]:
    """Rule-based splitting with an abbreviation guard.

    Concatenating raw_texts with the original inter-sentence whitespace
    reconstructs the document exactly; each unit's (start, end) indexes
    into the document.
    """
    if not document.strip():
        raise InputError("document is empty")

    boundaries = []
    for match in _BOUNDARY_RE.finditer(document):
        # Word containing the terminal, e.g. "Mr." in "Mr. Smith".
        word_start = match.end()
        while word_start > 0 and not document[word_start - 1].isspace():
            word_start -= 1
        word = document[word_start:match.end()]
        if word in ABBREVIATIONS or word.rstrip("\"'”’)]") in ABBREVIATIONS:
            continue
        boundaries.append(match.end())

    units = []
    cursor = 0
    n = len(document)
    for boundary in boundaries + [n]:
        if boundary <= cursor:
            continue
        chunk = document[cursor:boundary]
        stripped = chunk.strip()
        if not stripped:
            cursor = boundary
            continue
        start = cursor + (len(chunk) - len(chunk.lstrip()))
        end = start + len(stripped)
        units.append(SentenceUnit(
            index=len(units), raw_text=stripped, resolved_text=stripped,
            window_text=stripped, start=start, end=end,
        ))
        cursor = boundary
    return units


def _compatible(pronoun: str, label: str) -> bool:
    p = pronoun.lower()
    if p in _PERSON_PRONOUNS:
        return label == "person"
    if p in _THING_PRONOUNS:
        return label in ("org", "location", "misc")
    return True  # they/them/their bind to any class


def resolve_coreferences(
    units: list[SentenceUnit], entities: list[EntitySpan]
) -> list[SentenceUnit]:
    """Replace third-person pronouns with the nearest preceding compatible
    entity mention; pronouns without an antecedent are left alone.

    Entity offsets refer to the original document, so antecedent search
    spans everything before the pronoun, not just the current sentence.
    """
    resolved_units = []
    for unit in units:
        replacements = []  # (rel_start, rel_end, entity_text)
        for match in _PRONOUN_RE.finditer(unit.raw_text):
            abs_start = unit.start + match.start()
            best: EntitySpan | None = None
            for ent in entities:
                if ent.end <= abs_start and _compatible(match.group(0), ent.label):
                    if best is None or ent.end > best.end:
                        best = ent
            if best is not None:
                replacements.append((match.start(), match.end(), best.text))
        text = unit.raw_text
        for rel_start, rel_end, ent_text in reversed(replacements):
            text = text[:rel_start] + ent_text + text[rel_end:]
        resolved_units.append(replace(unit, resolved_text=text, window_text=text))
    return resolved_units


def build_windows(units: list[SentenceUnit], radius: int) -> list[SentenceUnit]:
    """window_text(i) joins resolved sentences i-radius .. i+radius,
    truncated at the document boundaries."""
    if radius < 0:
        raise InputError(f"radius must be >= 0, got {radius}")
    n = len(units)
    out = []
    for unit in units:
        lo = max(0, unit.index - radius)
        hi = min(n - 1, unit.index + radius)
        window = " ".join(units[j].resolved_text for j in range(lo, hi + 1))
        out.append(replace(unit, window_text=window))
    return out


def _doc_hash(document: str) -> str:
    return hashlib.sha256(document.encode("utf-8")).hexdigest()[:12]


def _claim_id(doc_hash: str, origin: Origin, kind: ClaimKind, ordinal: int) -> str:
    return f"{origin[:3]}-{kind[:3]}-{ordinal:04d}-{doc_hash}"


def decompose(
    document: str,
    origin: Origin,
    cfg: DecomposeConfig,
    providers: ProviderSet,
) -> tuple[list[Claim], bool]:
    """Produce claims for one document; the boolean mirrors extraction failure
    (always False for the sici strategy)."""
    if not document.strip():
        raise InputError("document is empty")
    doc_hash = _doc_hash(document)

    if cfg.strategy == "triples":
        outcome = extract_triples_llm(document, providers.extraction)
        if outcome.failed:
            return [], True
        # LLM extraction yields no reliable offsets; provenance is the whole
        # trimmed document.
        stripped = document.strip()
        lead = len(document) - len(document.lstrip())
        span = (lead, lead + len(stripped))
        claims = [
            Claim(
                id=_claim_id(doc_hash, origin, "triple", i),
                text=f"{t.subject} {t.predicate} {t.object}",
                kind="triple",
                origin=origin,
                span=span,
                triple=t,
            )
            for i, t in enumerate(outcome.triples)
        ]
        return claims, False

    units = split_sentences(document)
    if cfg.coref:
        entities = ner_entities(document, providers.ner)
        units = resolve_coreferences(units, entities)
    # Context windows apply to the side under audit; sources stay sentence-level.
    radius = cfg.window_radius if origin == "output" else 0
    units = build_windows(units, radius)
    claims = [
        Claim(
            id=_claim_id(doc_hash, origin, "sentence", u.index),
            text=u.window_text,
            kind="sentence",
            origin=origin,
            span=(u.start, u.end),
            sentence_index=u.index,
        )
        for u in units
    ]
    return claims, False
