"""Append-only session persistence for the HTTP service.

Each session is one JSON-lines event log under the store root; the in-memory
index is rebuilt by scanning the directory, so a crashed process loses at
most a torn trailing line. The skill library lives beside the sessions as a
single versioned JSON document.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path

from ..domain import Instruction, Round, Session, Trajectory
from ..eventlog import EventLog
from ..skills import SkillLibrary


@dataclass
class SessionRecord:
    id: str
    created_at: float
    instruction: Instruction
    max_rounds: int


class SessionStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.sessions_dir = self.root / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.library_path = self.root / "skills.json"
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._index: dict[str, SessionRecord] = {}
        self.rebuild_index()

    # ---------------------------------------------------------------- index

    def rebuild_index(self) -> None:
        """Scan the store directory; the filesystem is the source of truth."""
        index: dict[str, SessionRecord] = {}
        for path in self.sessions_dir.glob("*.jsonl"):
            events = EventLog(path).read()
            header = next((e for e in events if e.get("type") == "session_created"), None)
            if header is None:
                continue
            index[header["session_id"]] = SessionRecord(
                header["session_id"],
                header["created_at"],
                Instruction.from_dict(header["instruction"]),
                header["max_rounds"],
            )
        self._index = index

    def list_sessions(self, offset: int = 0, limit: int = 50) -> list[SessionRecord]:
        ordered = sorted(self._index.values(), key=lambda r: (r.created_at, r.id))
        return ordered[offset : offset + limit]

    def exists(self, session_id: str) -> bool:
        return session_id in self._index

    def lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    # -------------------------------------------------------------- sessions

    def log_path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.jsonl"

    def event_log(self, session_id: str) -> EventLog:
        return EventLog(self.log_path(session_id))

    def create_session(self, instruction: Instruction, max_rounds: int) -> str:
        session_id = uuid.uuid4().hex[:12]
        created_at = time.time()
        self.event_log(session_id).append(
            {
                "type": "session_created",
                "session_id": session_id,
                "created_at": created_at,
                "instruction": instruction.to_dict(),
                "max_rounds": max_rounds,
            }
        )
        self._index[session_id] = SessionRecord(
            session_id, created_at, instruction, max_rounds
        )
        return session_id

    def load_session(self, session_id: str) -> tuple[Session, dict[int, Trajectory]]:
        """Replay the event log into a Session plus per-round trajectories."""
        record = self._index[session_id]
        session = Session(
            session_id, record.instruction, max_rounds=record.max_rounds
        )
        trajectories: dict[int, Trajectory] = {}
        for event in self.event_log(session_id).read():
            kind = event.get("type")
            if kind == "round_artifacts":
                session.rounds.append(Round.from_dict(event))
                session.round_index = event["round"]
            elif kind == "trajectory":
                trajectories[event["round"]] = Trajectory.from_dict(event["trajectory"])
        return session, trajectories

    # --------------------------------------------------------------- library

    def load_library(self) -> SkillLibrary:
        return SkillLibrary.load_or_empty(self.library_path)

    def save_library(self, library: SkillLibrary) -> None:
        library.save(self.library_path)
