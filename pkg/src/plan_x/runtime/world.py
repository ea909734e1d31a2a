"""Simulated office environment backed by an optional root directory.

Directory layout (every part optional)::

    <root>/
      appointments.json     calendar rows: subject, start, hour, year, isrecurring
      outbox.jsonl          one sent email/response per line
      inbox.jsonl           incoming emails: id, from, subject, body, [attachment], [goals]
      web.json              search fixtures: {"query": "result text"}
      api/<name>.csv        tables served by connect-api
      models/<name>.json    trained model dumps
      **/*.csv              tables
      **/*.pdf.txt          text payload of <name>.pdf (same for .docx.txt)
      **/*.pptx             presentation container (JSON)
      anything else         plain text

Mutations made through the world are written through to the root directory.
"""

from __future__ import annotations

import copy
import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

import pandas as pd

from plan_x.errors import PlanXError
from plan_x.io.json_io import dumps_json, read_json, read_jsonl, write_json, write_jsonl, write_text


logger = logging.getLogger(__name__)

APPOINTMENTS_FILE = "appointments.json"
OUTBOX_FILE = "outbox.jsonl"
INBOX_FILE = "inbox.jsonl"
WEB_FILE = "web.json"
API_DIR = "api"
MODELS_DIR = "models"
APPOINTMENT_COLUMNS = ("subject", "start", "hour", "year", "isrecurring")

TABLE_SUFFIXES = (".csv", ".xlsx", ".xls")
WRAPPED_TEXT_SUFFIXES = (".pdf", ".docx", ".doc")
PRESENTATION_SUFFIXES = (".pptx", ".ppt")
_RESERVED = (APPOINTMENTS_FILE, OUTBOX_FILE, INBOX_FILE, WEB_FILE)

FileValue = Union[pd.DataFrame, str, Dict[str, Any]]


class WorldError(LookupError):
    pass


def normalize_path(path: str) -> str:
    """World key for ``path``: relative, posix, no ``./`` prefix."""
    cleaned = str(path).strip().replace("\\", "/")
    pure = PurePosixPath(cleaned)
    if pure.is_absolute() or ".." in pure.parts:
        raise WorldError(f"path escapes the world root: {path}")
    key = pure.as_posix()
    if key in ("", "."):
        raise WorldError("empty path")
    return key


def _suffix(key: str) -> str:
    return PurePosixPath(key).suffix.lower()


def _disk_name(key: str) -> str:
    if _suffix(key) in WRAPPED_TEXT_SUFFIXES:
        return key + ".txt"
    return key


@dataclass
class WorldSnapshot:
    files: Dict[str, FileValue]
    calendar: List[Dict[str, Any]]
    outbox: List[Dict[str, Any]]
    inbox: List[Dict[str, Any]]
    web: Dict[str, str]
    apis: Dict[str, pd.DataFrame]
    models: Dict[str, Dict[str, Any]]


def _copy_value(value: Any) -> Any:
    if isinstance(value, pd.DataFrame):
        return value.copy(deep=True)
    return copy.deepcopy(value)


@dataclass
class OfficeWorld:
    root: Optional[Path] = None
    files: Dict[str, FileValue] = field(default_factory=dict)
    calendar: List[Dict[str, Any]] = field(default_factory=list)
    outbox: List[Dict[str, Any]] = field(default_factory=list)
    inbox: List[Dict[str, Any]] = field(default_factory=list)
    web: Dict[str, str] = field(default_factory=dict)
    apis: Dict[str, pd.DataFrame] = field(default_factory=dict)
    models: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    # ------------------------------------------------------------ loading

    @classmethod
    def load(cls, root: Union[str, Path]) -> "OfficeWorld":
        root_path = Path(root)
        root_path.mkdir(parents=True, exist_ok=True)
        world = cls(root=root_path)
        for path in sorted(p for p in root_path.rglob("*") if p.is_file()):
            rel = path.relative_to(root_path).as_posix()
            try:
                world._load_file(path, rel)
            except (OSError, ValueError, TypeError, pd.errors.ParserError) as exc:
                raise PlanXError("config", f"cannot load world file {rel}: {exc}") from exc
        logger.info(
            "world: loaded files=%d appointments=%d inbox=%d",
            len(world.files),
            len(world.calendar),
            len(world.inbox),
        )
        return world

    def _load_file(self, path: Path, rel: str) -> None:
        parts = PurePosixPath(rel).parts
        if rel == APPOINTMENTS_FILE:
            self.calendar = list(read_json(path))
        elif rel == OUTBOX_FILE:
            self.outbox = read_jsonl(path)
        elif rel == INBOX_FILE:
            self.inbox = read_jsonl(path)
        elif rel == WEB_FILE:
            self.web = dict(read_json(path))
        elif parts[0] == API_DIR and len(parts) == 2:
            self.apis[PurePosixPath(rel).stem] = pd.read_csv(path)
        elif parts[0] == MODELS_DIR and len(parts) == 2:
            self.models[PurePosixPath(rel).stem] = read_json(path)
        elif rel.endswith(".txt") and _suffix(rel[: -len(".txt")]) in WRAPPED_TEXT_SUFFIXES:
            self.files[rel[: -len(".txt")]] = path.read_text(encoding="utf-8")
        elif _suffix(rel) in TABLE_SUFFIXES:
            self.files[rel] = pd.read_csv(path)
        elif _suffix(rel) in PRESENTATION_SUFFIXES:
            self.files[rel] = read_json(path)
        else:
            self.files[rel] = path.read_text(encoding="utf-8")

    # -------------------------------------------------------- persistence

    def _write_file(self, key: str) -> None:
        if self.root is None:
            return
        target = self.root / _disk_name(key)
        value = self.files[key]
        if isinstance(value, pd.DataFrame):
            target.parent.mkdir(parents=True, exist_ok=True)
            value.to_csv(target, index=False)
        elif isinstance(value, dict):
            write_json(target, value)
        else:
            write_text(target, value)

    def _unlink(self, key: str) -> None:
        if self.root is None:
            return
        target = self.root / _disk_name(key)
        if target.exists():
            target.unlink()

    def _write_outbox(self) -> None:
        if self.root is not None:
            write_jsonl(self.root / OUTBOX_FILE, self.outbox)

    def _write_calendar(self) -> None:
        if self.root is not None:
            write_json(self.root / APPOINTMENTS_FILE, self.calendar)

    def save(self) -> None:
        """Rewrite every store under the root directory."""
        if self.root is None:
            return
        for key in self.files:
            self._write_file(key)
        self._write_outbox()
        self._write_calendar()
        if self.inbox:
            write_jsonl(self.root / INBOX_FILE, self.inbox)
        if self.web:
            write_json(self.root / WEB_FILE, self.web)
        for name, table in self.apis.items():
            (self.root / API_DIR).mkdir(parents=True, exist_ok=True)
            table.to_csv(self.root / API_DIR / f"{name}.csv", index=False)
        for name, dump in self.models.items():
            write_json(self.root / MODELS_DIR / f"{name}.json", dump)

    # -------------------------------------------------------------- files

    def resolve(self, path: str, *suffixes: str) -> str:
        """Key of an existing file at ``path`` or ``path`` plus one of ``suffixes``."""
        key = normalize_path(path)
        for candidate in (key, *(key + s for s in suffixes)):
            if candidate in self.files:
                return candidate
        raise WorldError(f"no such file: {path}")

    def has_file(self, path: str) -> bool:
        try:
            return normalize_path(path) in self.files
        except WorldError:
            return False

    def read_table(self, path: str) -> pd.DataFrame:
        key = self.resolve(path, ".csv")
        value = self.files[key]
        if not isinstance(value, pd.DataFrame):
            raise WorldError(f"not a table: {path}")
        return value.copy()

    def write_table(self, path: str, table: pd.DataFrame) -> str:
        key = normalize_path(path)
        self.files[key] = table.copy()
        self._write_file(key)
        logger.info("world: wrote table %s rows=%d", key, len(table))
        return key

    def read_text(self, path: str) -> str:
        key = self.resolve(path, ".txt")
        value = self.files[key]
        if isinstance(value, pd.DataFrame):
            return value.to_csv(index=False)
        if isinstance(value, dict):
            return dumps_json(value)
        return value

    def write_text(self, path: str, text: str) -> str:
        key = normalize_path(path)
        self.files[key] = text
        self._write_file(key)
        logger.info("world: wrote text %s chars=%d", key, len(text))
        return key

    def write_presentation(self, path: str, container: Dict[str, Any]) -> str:
        key = normalize_path(path)
        self.files[key] = copy.deepcopy(container)
        self._write_file(key)
        logger.info("world: wrote presentation %s slides=%d", key, len(container.get("slides", [])))
        return key

    def presentation(self, path: str) -> Dict[str, Any]:
        value = self.files.get(normalize_path(path))
        if not isinstance(value, dict):
            raise WorldError(f"no presentation at {path}")
        return value

    def remove_file(self, path: str) -> None:
        key = normalize_path(path)
        if self.files.pop(key, None) is not None:
            self._unlink(key)

    def text_files(self) -> Iterator[Tuple[str, str]]:
        for key in sorted(self.files):
            value = self.files[key]
            if isinstance(value, str):
                yield key, value

    def find_text(self, needle: str, path: Optional[str] = None) -> List[Tuple[str, str]]:
        """Lines containing ``needle`` (case-insensitive), optionally in one file."""
        wanted = needle.lower()
        only = normalize_path(path) if path else None
        hits: List[Tuple[str, str]] = []
        for key, text in self.text_files():
            if only is not None and key != only:
                continue
            for line in text.splitlines():
                if wanted in line.lower():
                    hits.append((key, line.strip()))
        return hits

    # ------------------------------------------------- calendar and email

    def appointments(self) -> pd.DataFrame:
        return pd.DataFrame(self.calendar, columns=list(APPOINTMENT_COLUMNS))

    def add_appointment(self, row: Dict[str, Any]) -> None:
        self.calendar.append(dict(row))
        self._write_calendar()
        logger.info("world: calendar rows=%d", len(self.calendar))

    def send(self, message: Dict[str, Any]) -> None:
        self.outbox.append(copy.deepcopy(message))
        self._write_outbox()
        logger.info("world: outbox %s messages=%d", message.get("kind", "message"), len(self.outbox))

    def inbox_message(self, ref: Any) -> Dict[str, Any]:
        for message in self.inbox:
            if ref in (message.get("id"), message.get("subject")):
                return message
        raise WorldError(f"no inbox message {ref!r}")

    # -------------------------------------------------- models and fixtures

    def save_model(self, name: str, dump: Dict[str, Any]) -> None:
        self.models[name] = copy.deepcopy(dump)
        if self.root is not None:
            write_json(self.root / MODELS_DIR / f"{name}.json", dump)
        logger.info("world: saved model %s", name)

    def model(self, name: str) -> Dict[str, Any]:
        if name not in self.models:
            raise WorldError(f"no model named {name!r}")
        return self.models[name]

    def api_table(self, name: str) -> pd.DataFrame:
        if name not in self.apis:
            raise WorldError(f"no api fixture named {name!r}")
        return self.apis[name].copy()

    def web_result(self, query: str) -> str:
        if query in self.web:
            return self.web[query]
        lowered = query.lower()
        for key in sorted(self.web):
            if key.lower() in lowered or lowered in key.lower():
                return self.web[key]
        raise WorldError(f"no web result for {query!r}")

    # --------------------------------------------------- snapshot/restore

    def snapshot(self) -> WorldSnapshot:
        return WorldSnapshot(
            files={k: _copy_value(v) for k, v in self.files.items()},
            calendar=copy.deepcopy(self.calendar),
            outbox=copy.deepcopy(self.outbox),
            inbox=copy.deepcopy(self.inbox),
            web=dict(self.web),
            apis={k: v.copy() for k, v in self.apis.items()},
            models=copy.deepcopy(self.models),
        )

    def restore(self, snapshot: WorldSnapshot) -> None:
        for key in set(self.files) - set(snapshot.files):
            self._unlink(key)
        self.files = {k: _copy_value(v) for k, v in snapshot.files.items()}
        self.calendar = copy.deepcopy(snapshot.calendar)
        self.outbox = copy.deepcopy(snapshot.outbox)
        self.inbox = copy.deepcopy(snapshot.inbox)
        self.web = dict(snapshot.web)
        self.apis = {k: v.copy() for k, v in snapshot.apis.items()}
        self.models = copy.deepcopy(snapshot.models)
        self.save()

    def fingerprint(self) -> str:
        """Digest of everything an executor can read; equal worlds give equal digests."""

        def plain(value: Any) -> Any:
            if isinstance(value, pd.DataFrame):
                return value.to_csv(index=False)
            return value

        content = {
            "files": {k: plain(v) for k, v in sorted(self.files.items())},
            "calendar": self.calendar,
            "inbox": self.inbox,
            "web": self.web,
            "apis": {k: plain(v) for k, v in sorted(self.apis.items())},
            "models": self.models,
        }
        return hashlib.sha256(dumps_json(content).encode("utf-8")).hexdigest()
