"""Embedded single-file persistence (SQLite) for the study platform.

Schema (one database file, no external daemon):

    participants(id PK, consent, answers JSON)
    routes(key PK "project:route", project_id, route_id, participant_id, body JSON)
    assets(kind, key) -> body BLOB          -- network document, rasters by hour
    analyses(route_key PK) -> body JSON     -- replaced on recompute
    packages(id PK "route_key:vN", route_key, participant_id, version, body JSON)
    feedback(participant_id PK) -> body JSON -- one active record, latest wins

Record bodies are stored as canonical JSON so persisted entities round-trip
to equal values and repeated pipelines stay byte-identical. Writes are
serialized behind a process-level lock; readers open short-lived connections.
"""
from __future__ import annotations

import json
import sqlite3
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import InvalidDataError, NotFoundError
from .network import Coord

_SCHEMA = """
CREATE TABLE IF NOT EXISTS participants (
    id TEXT PRIMARY KEY,
    consent INTEGER NOT NULL,
    answers TEXT NOT NULL DEFAULT '{}'
);
CREATE TABLE IF NOT EXISTS routes (
    key TEXT PRIMARY KEY,
    project_id TEXT NOT NULL,
    route_id TEXT NOT NULL,
    participant_id TEXT NOT NULL,
    body TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS assets (
    kind TEXT NOT NULL,
    key TEXT NOT NULL,
    body BLOB NOT NULL,
    PRIMARY KEY (kind, key)
);
CREATE TABLE IF NOT EXISTS analyses (
    route_key TEXT PRIMARY KEY,
    body TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS packages (
    id TEXT PRIMARY KEY,
    route_key TEXT NOT NULL,
    participant_id TEXT NOT NULL,
    version INTEGER NOT NULL,
    body TEXT NOT NULL,
    UNIQUE (route_key, version)
);
CREATE TABLE IF NOT EXISTS feedback (
    participant_id TEXT PRIMARY KEY,
    body TEXT NOT NULL
);
"""


def canonical_json(data) -> str:
    """Stable serialization used for every stored body and emitted report."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Participant:
    id: str
    consent: bool
    answers: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"id": self.id, "consent": self.consent, "answers": dict(self.answers)}


@dataclass(frozen=True)
class RouteRecord:
    """A recorded home-to-school route as submitted by an escorting parent."""

    project_id: str
    route_id: str
    participant_id: str
    home: Coord
    school: Coord
    mode: str  # walk | cycle | car
    geometry: tuple[Coord, ...]
    timestamp: str

    @property
    def key(self) -> str:
        return f"{self.project_id}:{self.route_id}"

    def to_dict(self) -> dict:
        return {
            "project_id": self.project_id,
            "route_id": self.route_id,
            "participant_id": self.participant_id,
            "home": [self.home.x, self.home.y],
            "school": [self.school.x, self.school.y],
            "mode": self.mode,
            "geometry": [[p.x, p.y] for p in self.geometry],
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RouteRecord":
        return cls(
            project_id=data["project_id"],
            route_id=data["route_id"],
            participant_id=data["participant_id"],
            home=Coord(float(data["home"][0]), float(data["home"][1])),
            school=Coord(float(data["school"][0]), float(data["school"][1])),
            mode=data["mode"],
            geometry=tuple(Coord(float(p[0]), float(p[1])) for p in data["geometry"]),
            timestamp=data["timestamp"],
        )


@dataclass(frozen=True)
class FeedbackRecord:
    participant_id: str
    q1_learned: bool
    q2_will_change: bool
    q3_can_act: bool
    q4_rating: int
    q1_text: str = ""
    q2_text: str = ""
    q3_text: str = ""
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {
            "participant_id": self.participant_id,
            "q1_learned": self.q1_learned,
            "q1_text": self.q1_text,
            "q2_will_change": self.q2_will_change,
            "q2_text": self.q2_text,
            "q3_can_act": self.q3_can_act,
            "q3_text": self.q3_text,
            "q4_rating": self.q4_rating,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeedbackRecord":
        return cls(
            participant_id=data["participant_id"],
            q1_learned=bool(data["q1_learned"]),
            q1_text=data.get("q1_text", ""),
            q2_will_change=bool(data["q2_will_change"]),
            q2_text=data.get("q2_text", ""),
            q3_can_act=bool(data["q3_can_act"]),
            q3_text=data.get("q3_text", ""),
            q4_rating=int(data["q4_rating"]),
            timestamp=data.get("timestamp", ""),
        )


class Store:
    """SQLite-backed store; one instance per database file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        with self._connect() as conn:
            conn.executescript(_SCHEMA)

    def _connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self.path)
        conn.row_factory = sqlite3.Row
        return conn

    # -- participants -------------------------------------------------

    def put_participant(self, participant: Participant) -> None:
        with self._lock, self._connect() as conn:
            conn.execute(
                "INSERT OR REPLACE INTO participants (id, consent, answers) VALUES (?, ?, ?)",
                (participant.id, int(participant.consent), canonical_json(participant.answers)),
            )

    def get_participant(self, participant_id: str) -> Participant:
        with self._connect() as conn:
            row = conn.execute("SELECT * FROM participants WHERE id = ?", (participant_id,)).fetchone()
        if row is None:
            raise NotFoundError(f"unknown participant {participant_id!r}")
        return Participant(id=row["id"], consent=bool(row["consent"]), answers=json.loads(row["answers"]))

    def has_participant(self, participant_id: str) -> bool:
        with self._connect() as conn:
            row = conn.execute("SELECT 1 FROM participants WHERE id = ?", (participant_id,)).fetchone()
        return row is not None

    # -- routes --------------------------------------------------------

    def put_route(self, record: RouteRecord) -> str:
        with self._lock, self._connect() as conn:
            conn.execute(
                "INSERT OR REPLACE INTO routes (key, project_id, route_id, participant_id, body) "
                "VALUES (?, ?, ?, ?, ?)",
                (record.key, record.project_id, record.route_id, record.participant_id,
                 canonical_json(record.to_dict())),
            )
        return record.key

    def get_route(self, key: str) -> RouteRecord:
        with self._connect() as conn:
            row = conn.execute("SELECT body FROM routes WHERE key = ?", (key,)).fetchone()
        if row is None:
            raise NotFoundError(f"unknown route {key!r}")
        return RouteRecord.from_dict(json.loads(row["body"]))

    def iter_routes(self, project_id: str | None = None) -> Iterator[RouteRecord]:
        with self._connect() as conn:
            if project_id is None:
                rows = conn.execute("SELECT body FROM routes ORDER BY key").fetchall()
            else:
                rows = conn.execute(
                    "SELECT body FROM routes WHERE project_id = ? ORDER BY key", (project_id,)
                ).fetchall()
        for row in rows:
            yield RouteRecord.from_dict(json.loads(row["body"]))

    # -- assets ----------------------------------------------------------

    def put_asset(self, kind: str, key: str, body: bytes) -> None:
        with self._lock, self._connect() as conn:
            conn.execute(
                "INSERT OR REPLACE INTO assets (kind, key, body) VALUES (?, ?, ?)", (kind, key, body)
            )

    def get_asset(self, kind: str, key: str) -> bytes | None:
        with self._connect() as conn:
            row = conn.execute("SELECT body FROM assets WHERE kind = ? AND key = ?", (kind, key)).fetchone()
        return None if row is None else bytes(row["body"])

    def asset_keys(self, kind: str) -> list[str]:
        with self._connect() as conn:
            rows = conn.execute("SELECT key FROM assets WHERE kind = ? ORDER BY key", (kind,)).fetchall()
        return [row["key"] for row in rows]

    # -- analyses -------------------------------------------------------

    def put_analysis(self, route_key: str, body: str) -> None:
        with self._lock, self._connect() as conn:
            conn.execute(
                "INSERT OR REPLACE INTO analyses (route_key, body) VALUES (?, ?)", (route_key, body)
            )

    def get_analysis(self, route_key: str) -> dict | None:
        with self._connect() as conn:
            row = conn.execute("SELECT body FROM analyses WHERE route_key = ?", (route_key,)).fetchone()
        return None if row is None else json.loads(row["body"])

    def get_analysis_body(self, route_key: str) -> str | None:
        with self._connect() as conn:
            row = conn.execute("SELECT body FROM analyses WHERE route_key = ?", (route_key,)).fetchone()
        return None if row is None else row["body"]

    # -- packages --------------------------------------------------------

    def add_package(self, route_key: str, participant_id: str, body: str) -> tuple[str, int]:
        """Store an immutable package snapshot; versions count up from 1."""
        with self._lock, self._connect() as conn:
            row = conn.execute(
                "SELECT COALESCE(MAX(version), 0) AS v FROM packages WHERE route_key = ?", (route_key,)
            ).fetchone()
            version = int(row["v"]) + 1
            package_id = f"{route_key}:v{version}"
            conn.execute(
                "INSERT INTO packages (id, route_key, participant_id, version, body) VALUES (?, ?, ?, ?, ?)",
                (package_id, route_key, participant_id, version, body),
            )
        return package_id, version

    def get_package_body(self, package_id: str) -> str:
        with self._connect() as conn:
            row = conn.execute("SELECT body FROM packages WHERE id = ?", (package_id,)).fetchone()
        if row is None:
            raise NotFoundError(f"unknown package {package_id!r}")
        return row["body"]

    def participant_has_package(self, participant_id: str) -> bool:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT 1 FROM packages WHERE participant_id = ? LIMIT 1", (participant_id,)
            ).fetchone()
        return row is not None

    # -- feedback ----------------------------------------------------------

    def put_feedback(self, record: FeedbackRecord) -> None:
        if not 1 <= record.q4_rating <= 5:
            raise InvalidDataError(f"rating must be in 1..5, got {record.q4_rating}")
        with self._lock, self._connect() as conn:
            conn.execute(
                "INSERT OR REPLACE INTO feedback (participant_id, body) VALUES (?, ?)",
                (record.participant_id, canonical_json(record.to_dict())),
            )

    def get_feedback(self, participant_id: str) -> FeedbackRecord | None:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT body FROM feedback WHERE participant_id = ?", (participant_id,)
            ).fetchone()
        return None if row is None else FeedbackRecord.from_dict(json.loads(row["body"]))
