"""File-backed session store.

One directory per session: session.json holds metadata, revisions/<n>.json
hold graph documents, feedback.jsonl is an append-only log. Revision and
feedback history are never mutated or reordered; per-session writes are
serialized by an in-process lock (the service is single-process by design).
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import InputError


@dataclass
class Revision:
    revision_id: int
    output_text: str
    created_at: float
    document: dict


@dataclass
class Feedback:
    revision_id: int
    claim_id: str
    verdict_override: str
    comment: str
    timestamp: float


@dataclass
class Session:
    session_id: str
    source_text: str
    config: dict
    status: str  # pending | ready | failed
    created_at: float
    error: str = ""
    revisions: list[Revision] = field(default_factory=list)
    feedback: list[Feedback] = field(default_factory=list)

    @property
    def latest_revision(self) -> Revision | None:
        return self.revisions[-1] if self.revisions else None


class SessionStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _dir(self, session_id: str) -> Path:
        return self.root / session_id

    def create(self, source_text: str, config: dict, status: str = "pending") -> Session:
        session = Session(
            session_id=uuid.uuid4().hex[:12],
            source_text=source_text,
            config=config,
            status=status,
            created_at=time.time(),
        )
        sdir = self._dir(session.session_id)
        (sdir / "revisions").mkdir(parents=True)
        self._write_meta(session)
        return session

    def _write_meta(self, session: Session) -> None:
        meta = {
            "session_id": session.session_id,
            "source_text": session.source_text,
            "config": session.config,
            "status": session.status,
            "created_at": session.created_at,
            "error": session.error,
        }
        path = self._dir(session.session_id) / "session.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(meta, ensure_ascii=False), encoding="utf-8")
        tmp.replace(path)

    def update_status(self, session: Session, status: str, error: str = "") -> None:
        session.status = status
        session.error = error
        self._write_meta(session)

    def add_revision(self, session: Session, output_text: str, document: dict) -> Revision:
        revision = Revision(
            revision_id=len(session.revisions) + 1,
            output_text=output_text,
            created_at=time.time(),
            document=document,
        )
        payload = {
            "revision_id": revision.revision_id,
            "output_text": revision.output_text,
            "created_at": revision.created_at,
            "document": revision.document,
        }
        path = self._dir(session.session_id) / "revisions" / f"{revision.revision_id}.json"
        path.write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")
        session.revisions.append(revision)
        return revision

    def add_feedback(self, session: Session, entry: Feedback) -> None:
        line = json.dumps({
            "revision_id": entry.revision_id,
            "claim_id": entry.claim_id,
            "verdict_override": entry.verdict_override,
            "comment": entry.comment,
            "timestamp": entry.timestamp,
        }, ensure_ascii=False)
        with open(self._dir(session.session_id) / "feedback.jsonl", "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
        session.feedback.append(entry)

    def get(self, session_id: str) -> Session | None:
        sdir = self._dir(session_id)
        meta_path = sdir / "session.json"
        if not meta_path.exists():
            return None
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        session = Session(
            session_id=meta["session_id"],
            source_text=meta["source_text"],
            config=meta["config"],
            status=meta["status"],
            created_at=meta["created_at"],
            error=meta.get("error", ""),
        )
        rev_dir = sdir / "revisions"
        if rev_dir.exists():
            for path in sorted(rev_dir.glob("*.json"), key=lambda p: int(p.stem)):
                raw = json.loads(path.read_text(encoding="utf-8"))
                session.revisions.append(Revision(
                    revision_id=raw["revision_id"],
                    output_text=raw["output_text"],
                    created_at=raw["created_at"],
                    document=raw["document"],
                ))
        fb_path = sdir / "feedback.jsonl"
        if fb_path.exists():
            with open(fb_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        raw = json.loads(line)
                        session.feedback.append(Feedback(
                            revision_id=raw["revision_id"],
                            claim_id=raw["claim_id"],
                            verdict_override=raw["verdict_override"],
                            comment=raw.get("comment", ""),
                            timestamp=raw["timestamp"],
                        ))
        return session

    def require(self, session_id: str) -> Session:
        session = self.get(session_id)
        if session is None:
            raise InputError(f"unknown session {session_id}")
        return session

    def list_ids(self) -> list[str]:
        return sorted(p.name for p in self.root.iterdir()
                      if p.is_dir() and (p / "session.json").exists())
