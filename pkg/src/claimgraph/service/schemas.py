"""Pydantic request/response models for the audit service API."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class AuditConfigModel(BaseModel):
    """Pipeline settings snapshotted onto a session at creation time."""

    model_config = ConfigDict(extra="forbid")

    strategy: Literal["sici", "triples"] = "sici"
    window_radius: int = Field(default=0, ge=0, le=3)
    coref: bool = True
    k: int = Field(default=3, ge=1, le=10)
    aggregation: Literal["max_entail", "mean_entail"] = "max_entail"
    threshold: float = Field(default=0.5, gt=0.0, lt=1.0)
    tau_nli: float = Field(default=0.5, gt=0.0, lt=1.0)
    tau_sim: float = Field(default=0.5, gt=0.0, lt=1.0)
    w_nli: float = 0.75
    w_sim: float = 0.25
    green_min: float = 0.75
    orange_min: float = 0.5
    seed: int = 0
    include_unreferenced: bool = False
    async_run: bool = False


class SessionCreateRequest(BaseModel):
    source_text: str = Field(min_length=1)
    output_text: str = Field(min_length=1)
    config: AuditConfigModel = Field(default_factory=AuditConfigModel)


class ReevaluateRequest(BaseModel):
    output_text: str = Field(min_length=1)


class FeedbackRequest(BaseModel):
    revision_id: int = Field(ge=1)
    claim_id: str = Field(min_length=1)
    verdict_override: Literal["confirm_reliable", "confirm_hallucination", "dispute"]
    comment: str = ""


class FeedbackOut(BaseModel):
    revision_id: int
    claim_id: str
    verdict_override: str
    comment: str
    timestamp: float


class RevisionOut(BaseModel):
    revision_id: int
    output_text: str
    created_at: float
    label: str | None = None
    score: float | None = None


class SessionOut(BaseModel):
    session_id: str
    status: str
    source_text: str
    config: AuditConfigModel
    error: str = ""
    revisions: list[RevisionOut] = []
    feedback: list[FeedbackOut] = []


class AckOut(BaseModel):
    ok: bool = True
    detail: str = ""


class HealthOut(BaseModel):
    status: str = "ok"
    version: str = ""
