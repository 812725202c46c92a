"""Content-addressed disk cache for provider responses.

Keys hash the provider kind, model name, operation, and canonicalized
input, so a byte-identical request never re-invokes the provider.  Values
for a key are identical by construction, which makes last-writer-wins
safe under concurrent writers; writes go through an atomic rename.
Entries have no TTL: model outputs for fixed inputs are treated as
immutable observations.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

log = logging.getLogger(__name__)


def cache_key(kind: str, model_name: str, operation: str, payload) -> str:
    canon = json.dumps(
        {"kind": kind, "model": model_name, "op": operation, "input": payload},
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


class ResponseCache:
    """Directory-backed JSON store addressed by request hash."""

    def __init__(self, cache_dir: str | Path):
        self.root = Path(cache_dir)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str):
        """Return the stored result or None. Corrupt entries are discarded."""
        path = self._path(key)
        if not path.exists():
            return None
        try:
            with open(path, encoding="utf-8") as fh:
                entry = json.load(fh)
            return entry["result"]
        except (json.JSONDecodeError, KeyError, OSError) as exc:
            log.warning("discarding corrupt cache entry %s: %s", path, exc)
            try:
                path.unlink()
            except OSError:
                pass
            return None

    def put(self, key: str, result) -> None:
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"result": result}, fh, ensure_ascii=False)
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
