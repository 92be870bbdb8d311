"""On-disk cache for expensive enumerations.

Entries are JSON files keyed by (kind, p, module version) with a sha256
checksum over the canonical payload encoding.  Writes go through an atomic
rename; a checksum mismatch on load quarantines the file instead of using or
deleting it.  Stale versions are ignored, never migrated.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from typing import Any, Optional

from .errors import ChecksumMismatch

CACHE_VERSION = "1"


def default_cache_dir() -> str:
    env = os.environ.get("SS3_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "ss3")


def _entry_path(cache_dir: str, kind: str, p: int) -> str:
    return os.path.join(cache_dir, f"{kind}_p{p}_v{CACHE_VERSION}.json")


def _checksum(payload: Any) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def store(cache_dir: str, kind: str, p: int, payload: Any) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    path = _entry_path(cache_dir, kind, p)
    doc = {
        "key": {"kind": kind, "p": p, "version": CACHE_VERSION},
        "checksum": _checksum(payload),
        "payload": payload,
    }
    fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=f".{kind}", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def load(cache_dir: str, kind: str, p: int) -> Optional[Any]:
    """Payload, or None on a cold/stale cache.  Corrupt entries are moved
    aside and reported."""
    path = _entry_path(cache_dir, kind, p)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError):
        _quarantine(path)
        raise ChecksumMismatch(f"unreadable cache entry quarantined: {path}")
    key = doc.get("key", {})
    if key.get("version") != CACHE_VERSION or key.get("kind") != kind or key.get("p") != p:
        return None
    if _checksum(doc.get("payload")) != doc.get("checksum"):
        _quarantine(path)
        raise ChecksumMismatch(f"corrupt cache entry quarantined: {path}")
    return doc["payload"]


def _quarantine(path: str) -> None:
    target = path + ".corrupt"
    if os.path.exists(target):
        os.unlink(target)
    os.replace(path, target)
