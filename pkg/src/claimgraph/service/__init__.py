"""FastAPI service exposing audit sessions, graphs, feedback, and re-evaluation."""

from .app import create_app, pipeline_config_from
from .schemas import AuditConfigModel
from .store import SessionStore

__all__ = ["AuditConfigModel", "SessionStore", "create_app", "pipeline_config_from"]
