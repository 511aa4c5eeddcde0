"""Single-directory entity store with atomic, durable writes.

One JSON record per entity under <root>/<kind>/<id>.json, plus a meta file
carrying the schema version. Writes go to a temp file in the same
directory, are fsynced, then renamed over the target (atomic on POSIX) and
the directory is fsynced, so an acknowledged write survives a crash.
"""

from __future__ import annotations

import errno
import fcntl
import json
import os
from pathlib import Path

from .errors import CorruptStore, StorageFull, StoreExists, StoreLocked

SCHEMA_VERSION = 1
KINDS = ("user", "group", "corpus", "project", "analysis")

_FULL_ERRNOS = {errno.ENOSPC, errno.EROFS, errno.EACCES, errno.EPERM, errno.EDQUOT}


def canonical_json(record: dict) -> bytes:
    return json.dumps(record, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False).encode("utf-8")


class Store:
    def __init__(self, root: Path):
        self.root = Path(root)
        self._lock_handle = None

    # -- lifecycle -----------------------------------------------------

    @classmethod
    def exists(cls, root) -> bool:
        return (Path(root) / "meta.json").is_file()

    @classmethod
    def create(cls, root, force: bool = False) -> "Store":
        root = Path(root)
        if cls.exists(root) and not force:
            raise StoreExists(f"store already present at {root} (use force to overwrite)")
        try:
            root.mkdir(parents=True, exist_ok=True)
            for kind in KINDS:
                (root / kind).mkdir(exist_ok=True)
                for stale in (root / kind).glob("*.json"):
                    stale.unlink()
        except OSError as exc:
            raise _translate_oserror(exc) from exc
        store = cls(root)
        store._write_file(root / "meta.json", canonical_json(
            {"schema": SCHEMA_VERSION, "application": "textlab"}))
        return store

    @classmethod
    def open(cls, root) -> "Store":
        root = Path(root)
        meta_path = root / "meta.json"
        if not meta_path.is_file():
            raise CorruptStore(
                f"no store at {root}: meta.json missing. Seed one with 'textlab seed'.")
        try:
            meta = json.loads(meta_path.read_bytes())
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptStore(
                f"unreadable meta.json at {root}: {exc}. "
                "Restore the data directory from backup or re-seed.") from exc
        if meta.get("schema") != SCHEMA_VERSION:
            raise CorruptStore(
                f"store schema {meta.get('schema')!r} is not supported "
                f"(this build reads schema {SCHEMA_VERSION}); migration is not provided.")
        return cls(root)

    @classmethod
    def open_or_create(cls, root) -> "Store":
        return cls.open(root) if cls.exists(root) else cls.create(root)

    # -- exclusive lock (held by a running server) ----------------------

    def acquire_lock(self):
        handle = open(self.root / ".lock", "w")
        try:
            fcntl.flock(handle, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            handle.close()
            raise StoreLocked(f"store at {self.root} is locked by a running server")
        self._lock_handle = handle

    def release_lock(self):
        if self._lock_handle is not None:
            fcntl.flock(self._lock_handle, fcntl.LOCK_UN)
            self._lock_handle.close()
            self._lock_handle = None

    def locked_elsewhere(self) -> bool:
        lock_path = self.root / ".lock"
        if not lock_path.exists():
            return False
        with open(lock_path, "w") as handle:
            try:
                fcntl.flock(handle, fcntl.LOCK_EX | fcntl.LOCK_NB)
            except OSError:
                return True
            fcntl.flock(handle, fcntl.LOCK_UN)
        return False

    # -- records ---------------------------------------------------------

    def write(self, kind: str, entity_id: int, record: dict):
        if kind not in KINDS:
            raise ValueError(f"unknown entity kind {kind!r}")
        path = self.root / kind / f"{entity_id}.json"
        self._write_file(path, canonical_json(record))

    def read_all(self, kind: str) -> dict[int, dict]:
        records = {}
        directory = self.root / kind
        if not directory.is_dir():
            return records
        for path in sorted(directory.glob("*.json")):
            try:
                record = json.loads(path.read_bytes())
            except (OSError, json.JSONDecodeError) as exc:
                raise CorruptStore(
                    f"unreadable record {path}: {exc}. "
                    "Remove or restore the file, then restart.") from exc
            records[int(path.stem)] = record
        return records

    def _write_file(self, path: Path, data: bytes):
        tmp = path.with_suffix(".tmp")
        try:
            with open(tmp, "wb") as handle:
                handle.write(data)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
            dir_fd = os.open(path.parent, os.O_RDONLY)
            try:
                os.fsync(dir_fd)
            finally:
                os.close(dir_fd)
        except OSError as exc:
            raise _translate_oserror(exc) from exc


def _translate_oserror(exc: OSError):
    if exc.errno in _FULL_ERRNOS:
        return StorageFull(f"cannot write store: {exc}")
    return StorageFull(f"store I/O failed: {exc}")
