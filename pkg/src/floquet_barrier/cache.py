"""Content-addressed result cache: one JSON record file per input hash."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

from .records import ResultRecord

CACHE_ENV = "FLOQUET_BARRIER_CACHE_DIR"


class ResultCache:
    def __init__(self, directory: Optional[str] = None, enabled: bool = True):
        if directory is None:
            directory = os.environ.get(CACHE_ENV, "")
        self.enabled = enabled and bool(directory)
        self.directory = Path(directory) if directory else None
        if self.enabled:
            self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> Optional[ResultRecord]:
        if not self.enabled:
            return None
        p = self._path(key)
        if not p.exists():
            return None
        return ResultRecord.from_json(p.read_text(encoding="utf-8"))

    def put(self, key: str, record: ResultRecord) -> None:
        if not self.enabled:
            return
        self._path(key).write_text(record.to_json(), encoding="utf-8")


def disabled_cache() -> ResultCache:
    return ResultCache(directory=None, enabled=False)
