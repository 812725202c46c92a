"""Exception taxonomy shared across the toolkit.

Exit-code mapping used by the CLI: configuration/input problems -> 1,
provider/transport problems -> 2 (a hallucinated verdict is exit 3 but
is not an error).
"""

from __future__ import annotations


class ClaimGraphError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(ClaimGraphError):
    """Invalid or missing configuration (endpoints, credentials, flags)."""


class InputError(ClaimGraphError):
    """Caller-supplied data violates a precondition."""


class TransportError(ClaimGraphError):
    """Provider endpoint unreachable or timed out."""

    def __init__(self, message: str, endpoint: str = ""):
        super().__init__(message)
        self.endpoint = endpoint


class DecodeError(ClaimGraphError):
    """Provider responded but the payload could not be interpreted."""

    def __init__(self, message: str, payload: object = None):
        super().__init__(message)
        self.payload = payload


class NumericError(ClaimGraphError):
    """Degenerate numeric input (zero-norm vector, non-finite value)."""


class ConsistencyError(ClaimGraphError):
    """Cross-referenced structures disagree (dangling ids, missing positions)."""


class JudgmentError(ClaimGraphError):
    """A claim could not be judged after retries; carries the claim id."""

    def __init__(self, message: str, claim_id: str = ""):
        super().__init__(message)
        self.claim_id = claim_id


class MetricError(ClaimGraphError):
    """A metric is undefined for the given inputs (e.g. single-class labels)."""


class ParseError(ClaimGraphError):
    """A data file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line_number: int = -1):
        super().__init__(message)
        self.line_number = line_number
