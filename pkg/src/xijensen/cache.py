"""Persistent on-disk cache of oracle values.

One JSON document per kind (``xi.json``, ``gamma.json``, ...) holding a list
of entries ``{n, digits, value, error, timestamp}`` with numbers stored as
decimal strings.  Writes are read-modify-write under a file lock and land via
``os.replace`` so readers never see a half-written document.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from pathlib import Path

from filelock import FileLock

ENV_VAR = "XIJENSEN_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "xijensen"


class OracleCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    def _path(self, kind: str) -> Path:
        return self.directory / f"{kind}.json"

    def _lock(self, kind: str) -> FileLock:
        self.directory.mkdir(parents=True, exist_ok=True)
        return FileLock(str(self._path(kind)) + ".lock")

    def _load(self, kind: str) -> list[dict]:
        path = self._path(kind)
        if not path.exists():
            return []
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return list(doc.get("entries", []))

    def _dump(self, kind: str, entries: list[dict]) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=f".{kind}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"kind": kind, "entries": entries}, fh, indent=1)
            os.replace(tmp, self._path(kind))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get(self, kind: str, n: int, digits: int) -> dict | None:
        """Entry for (kind, n) computed at ``digits`` or more, else None."""
        if not self._path(kind).exists():
            return None
        with self._lock(kind):
            entries = self._load(kind)
        best = None
        for e in entries:
            if e["n"] == n and e["digits"] >= digits and (best is None or e["digits"] < best["digits"]):
                best = e
        return best

    def put(self, kind: str, n: int, digits: int, value: str, error: str) -> None:
        entry = {"n": n, "digits": digits, "value": value, "error": error, "timestamp": time.time()}
        with self._lock(kind):
            entries = [e for e in self._load(kind) if not (e["n"] == n and e["digits"] == digits)]
            entries.append(entry)
            entries.sort(key=lambda e: (e["n"], e["digits"]))
            self._dump(kind, entries)

    def kinds(self) -> list[str]:
        if not self.directory.exists():
            return []
        return sorted(p.stem for p in self.directory.glob("*.json"))

    def stats(self) -> dict[str, dict]:
        out = {}
        for kind in self.kinds():
            with self._lock(kind):
                entries = self._load(kind)
            ns = [e["n"] for e in entries]
            out[kind] = {
                "entries": len(entries),
                "n_min": min(ns) if ns else None,
                "n_max": max(ns) if ns else None,
                "max_digits": max((e["digits"] for e in entries), default=None),
                "bytes": self._path(kind).stat().st_size,
            }
        return out

    def clear(self, kind: str | None = None) -> int:
        """Remove one kind (or all); returns the number of files deleted."""
        removed = 0
        for k in [kind] if kind else self.kinds():
            path = self._path(k)
            if path.exists():
                with self._lock(k):
                    path.unlink()
                removed += 1
        return removed
