"""Content-addressed on-disk cache for retrieval results.

Entries are keyed by (source, operation, normalized query or id). Source
errors are never cached.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from .models import CandidatePublication
from .sources.base import SourceClient, SourceError
from .sources.scripted import query_key

_MISS = object()


class RetrievalCache:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, source: str, op: str, key: str) -> Path:
        digest = hashlib.sha256(json.dumps([source, op, key]).encode("utf-8")).hexdigest()
        return self.root / digest[:2] / f"{digest}.json"

    def get(self, source: str, op: str, key: str):
        path = self._path(source, op, key)
        try:
            value = json.loads(path.read_text(encoding="utf-8"))["value"]
        except (FileNotFoundError, ValueError, KeyError):
            self.misses += 1
            return _MISS
        self.hits += 1
        return value

    def put(self, source: str, op: str, key: str, value) -> None:
        path = self._path(source, op, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        body = json.dumps({"source": source, "op": op, "key": key, "value": value},
                          sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(body)
        os.replace(tmp, path)


class CachedClient(SourceClient):
    """Serves repeat searches and lookups from a :class:`RetrievalCache`."""

    def __init__(self, inner: SourceClient, cache: RetrievalCache):
        super().__init__(None)
        self.inner = inner
        self.cache = cache
        self.name = inner.name

    def search(self, query: str, year: Optional[int] = None, limit: int = 10):
        key = f"{query_key(query)}|{limit}"
        hit = self.cache.get(self.name.value, "search", key)
        if hit is not _MISS:
            return [CandidatePublication.from_dict(c) for c in hit]
        out = self.inner.search(query, year, limit)
        if not isinstance(out, SourceError):
            self.cache.put(self.name.value, "search", key, [c.to_dict() for c in out])
        return out

    def lookup_id(self, arxiv_id: str):
        hit = self.cache.get(self.name.value, "lookup", arxiv_id)
        if hit is not _MISS:
            return CandidatePublication.from_dict(hit) if hit else None
        out = self.inner.lookup_id(arxiv_id)
        if not isinstance(out, SourceError):
            self.cache.put(self.name.value, "lookup", arxiv_id, out.to_dict() if out else None)
        return out
