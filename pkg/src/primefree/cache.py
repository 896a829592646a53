"""Persistent get-or-compute store for period data keyed by (spec hash, q).

File layout (JSON, UTF-8)::

    {"version": 1,
     "entries": {"<sha256 of canonical spec>:<q>":
                   {"q": "10", "s": "1", "L": "60", "bound_check": true,
                    "checksum": "<sha256 of the four fields above>"}}}

Entries whose checksum or shape does not match are discarded and
recomputed.  Writes go through an advisory lock file (``<path>.lock``) and an
atomic rename, so concurrent processes serialize their updates.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from pathlib import Path
from typing import Callable, Optional, Union

from filelock import FileLock

from .ilrs import IlrsSpec
from .modular import PeriodInfo, find_period

log = logging.getLogger(__name__)

CACHE_VERSION = 1


def spec_hash(spec: IlrsSpec) -> str:
    payload = json.dumps(spec.canonical(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def cache_key(spec: IlrsSpec, q: int) -> str:
    return f"{spec_hash(spec)}:{q}"


def _checksum(fields: dict) -> str:
    payload = json.dumps(fields, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _encode(info: PeriodInfo) -> dict:
    fields = info.to_dict()
    return {**fields, "checksum": _checksum(fields)}


def _decode(entry, q: int) -> Optional[PeriodInfo]:
    try:
        fields = {k: entry[k] for k in ("q", "s", "L", "bound_check")}
        if entry["checksum"] != _checksum(fields):
            return None
        info = PeriodInfo.from_dict(fields)
    except (KeyError, TypeError, ValueError):
        return None
    if info.q != q:
        return None
    return info


class PeriodCache:
    """Thread-safe in-memory map, optionally backed by a JSON file.

    ``computed`` counts how many values were produced by the compute
    callback rather than read back.
    """

    def __init__(self, path: Union[str, os.PathLike, None] = None):
        self.path = Path(path) if path is not None else None
        self._mem: dict[str, PeriodInfo] = {}
        self._lock = threading.Lock()
        self.computed = 0
        self.hits = 0
        self.rejected = 0

    def _read_file(self) -> dict:
        if self.path is None or not self.path.exists():
            return {}
        try:
            data = json.loads(self.path.read_text())
            if data.get("version") != CACHE_VERSION:
                return {}
            entries = data.get("entries", {})
            return entries if isinstance(entries, dict) else {}
        except (OSError, ValueError, AttributeError):
            log.warning("period cache %s unreadable, ignoring it", self.path)
            return {}

    def get(self, spec: IlrsSpec, q: int) -> Optional[PeriodInfo]:
        key = cache_key(spec, q)
        with self._lock:
            if key in self._mem:
                return self._mem[key]
        entry = self._read_file().get(key)
        if entry is None:
            return None
        info = _decode(entry, q)
        if info is None:
            self.rejected += 1
            log.warning("discarding corrupted cache entry %s", key)
            return None
        with self._lock:
            self._mem[key] = info
        return info

    def put(self, spec: IlrsSpec, q: int, info: PeriodInfo) -> None:
        key = cache_key(spec, q)
        with self._lock:
            self._mem[key] = info
        if self.path is None:
            return
        with FileLock(str(self.path) + ".lock"):
            entries = self._read_file()
            entries[key] = _encode(info)
            tmp = self.path.with_name(self.path.name + ".tmp")
            tmp.write_text(json.dumps({"version": CACHE_VERSION, "entries": entries},
                                      sort_keys=True, indent=1))
            os.replace(tmp, self.path)

    def get_or_compute(self, spec: IlrsSpec, q: int,
                       compute: Callable[[], PeriodInfo]) -> PeriodInfo:
        info = self.get(spec, q)
        if info is not None:
            self.hits += 1
            return info
        # duplicate concurrent computation is harmless: results are identical
        info = compute()
        self.computed += 1
        self.put(spec, q, info)
        return info


def cache_get_or_compute(cache: PeriodCache, spec: IlrsSpec, q: int) -> PeriodInfo:
    return find_period(spec, q, cache=cache)
