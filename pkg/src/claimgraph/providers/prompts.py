"""Versioned prompt text for LLM-backed triple extraction.

The prompt is configuration, not contract: HTTP extraction endpoints
receive it alongside the document and may ignore it.
"""

EXTRACTION_PROMPT_V1 = (
    "Decompose the passage into factual (subject, predicate, object) triples. "
    "Use surface forms from the passage, one triple per distinct fact, and "
    "return a JSON list of [subject, predicate, object] string triples. "
    "Return [] if the passage contains no checkable facts."
)
