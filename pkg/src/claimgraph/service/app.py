"""HTTP facade over the audit pipeline.

Sessions are created from a source/output pair, revised outputs are
re-evaluated against the same source and config, and reviewer feedback is
captured append-only (annotation, never recomputation). Graph documents
are served verbatim so positions and scores match the stored audit trail.
"""

from __future__ import annotations

import logging
import os

from fastapi import BackgroundTasks, FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .. import __version__
from ..errors import ClaimGraphError, InputError
from ..graph import LayoutConfig, graph_json_bytes
from ..pipeline import PipelineConfig, run_audit
from ..providers import ProviderSet
from ..score import ColorBands, ConfidenceWeights, QuadrantThresholds
from .schemas import (
    AckOut,
    AuditConfigModel,
    FeedbackOut,
    FeedbackRequest,
    HealthOut,
    ReevaluateRequest,
    RevisionOut,
    SessionCreateRequest,
    SessionOut,
)
from .store import Feedback, Session, SessionStore

import time

log = logging.getLogger(__name__)

DEFAULT_STORE_DIR = "./audit-sessions"


def pipeline_config_from(model: AuditConfigModel) -> PipelineConfig:
    return PipelineConfig(
        strategy=model.strategy,
        window_radius=model.window_radius,
        coref=model.coref,
        k=model.k,
        aggregation=model.aggregation,
        threshold=model.threshold,
        weights=ConfidenceWeights(w_nli=model.w_nli, w_sim=model.w_sim),
        quadrants=QuadrantThresholds(tau_nli=model.tau_nli, tau_sim=model.tau_sim),
        bands=ColorBands(green_min=model.green_min, orange_min=model.orange_min),
        layout=LayoutConfig(rng_seed=model.seed),
        include_unreferenced=model.include_unreferenced,
    )


def _session_out(session: Session) -> SessionOut:
    revisions = []
    for rev in session.revisions:
        response = rev.document.get("response", {})
        revisions.append(RevisionOut(
            revision_id=rev.revision_id,
            output_text=rev.output_text,
            created_at=rev.created_at,
            label=response.get("label"),
            score=response.get("score"),
        ))
    return SessionOut(
        session_id=session.session_id,
        status=session.status,
        source_text=session.source_text,
        config=AuditConfigModel(**session.config),
        error=session.error,
        revisions=revisions,
        feedback=[FeedbackOut(
            revision_id=f.revision_id, claim_id=f.claim_id,
            verdict_override=f.verdict_override, comment=f.comment, timestamp=f.timestamp,
        ) for f in session.feedback],
    )


def create_app(store_dir: str | None = None, providers: ProviderSet | None = None) -> FastAPI:
    store = SessionStore(store_dir or os.environ.get("AUDIT_STORE_DIR", DEFAULT_STORE_DIR))
    provider_set = providers if providers is not None else ProviderSet.from_env()

    app = FastAPI(title="claimgraph audit service", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[os.environ.get("AUDIT_UI_ORIGIN", "*")],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.providers = provider_set

    def evaluate_into(session: Session, output_text: str) -> None:
        """Run the pipeline and append the result as a new revision."""
        cfg = pipeline_config_from(AuditConfigModel(**session.config))
        try:
            outcome = run_audit(session.source_text, output_text, cfg, provider_set)
        except InputError:
            raise  # caller's fault; surfaces as 400
        except ClaimGraphError as exc:
            # Judgment/provider failures leave a diagnosable failed session.
            store.update_status(session, "failed", error=str(exc))
            return
        with store.lock(session.session_id):
            store.add_revision(session, output_text, outcome.document)
            store.update_status(session, "ready")

    @app.get("/healthz", response_model=HealthOut)
    def healthz() -> HealthOut:
        return HealthOut(status="ok", version=__version__)

    @app.post("/sessions", response_model=SessionOut, status_code=201)
    def create_session(req: SessionCreateRequest, background: BackgroundTasks) -> SessionOut:
        try:
            cfg_model = req.config
            pipeline_config_from(cfg_model)  # validate eagerly
        except (ClaimGraphError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        session = store.create(req.source_text, cfg_model.model_dump(), status="pending")
        if cfg_model.async_run:
            background.add_task(evaluate_into, session, req.output_text)
            return _session_out(session)
        evaluate_into(session, req.output_text)
        return _session_out(store.require(session.session_id))

    @app.get("/sessions/{session_id}", response_model=SessionOut)
    def get_session(session_id: str) -> SessionOut:
        session = store.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return _session_out(session)

    @app.get("/sessions/{session_id}/graph")
    def get_graph(session_id: str, revision: int | None = Query(default=None)) -> Response:
        session = store.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        if not session.revisions:
            raise HTTPException(status_code=404, detail="session has no evaluated revision yet")
        if revision is None:
            rev = session.revisions[-1]
        else:
            matches = [r for r in session.revisions if r.revision_id == revision]
            if not matches:
                raise HTTPException(status_code=404, detail=f"unknown revision {revision}")
            rev = matches[0]
        return Response(content=graph_json_bytes(rev.document), media_type="application/json")

    @app.post("/sessions/{session_id}/feedback", response_model=AckOut)
    def submit_feedback(session_id: str, req: FeedbackRequest) -> AckOut:
        session = store.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        revisions = {r.revision_id: r for r in session.revisions}
        if req.revision_id not in revisions:
            raise HTTPException(status_code=404, detail=f"unknown revision {req.revision_id}")
        node_ids = {n["id"] for n in revisions[req.revision_id].document.get("nodes", [])}
        if req.claim_id not in node_ids:
            raise HTTPException(
                status_code=404,
                detail=f"claim {req.claim_id} not in revision {req.revision_id}",
            )
        entry = Feedback(
            revision_id=req.revision_id,
            claim_id=req.claim_id,
            verdict_override=req.verdict_override,
            comment=req.comment,
            timestamp=time.time(),
        )
        with store.lock(session_id):
            store.add_feedback(session, entry)
        return AckOut(ok=True, detail="feedback recorded")

    @app.post("/sessions/{session_id}/reevaluate", response_model=SessionOut)
    def reevaluate(session_id: str, req: ReevaluateRequest) -> SessionOut:
        session = store.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        evaluate_into(session, req.output_text)
        return _session_out(store.require(session_id))

    @app.exception_handler(InputError)
    def input_error_handler(_request, exc: InputError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    return app
