"""Append-only JSON-lines event log backing session persistence."""

from __future__ import annotations

import json
import os
import time
from pathlib import Path


class EventLog:
    """One session's append-only artifact log.

    Every append is flushed and fsynced so a crashed process leaves behind
    every fully written event; a torn final line is ignored on read.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def append(self, event: dict) -> dict:
        record = dict(event)
        record.setdefault("ts", time.time())
        line = json.dumps(record, ensure_ascii=False, sort_keys=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        return record

    def read(self) -> list[dict]:
        if not self.path.exists():
            return []
        events: list[dict] = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    events.append(json.loads(line))
                except json.JSONDecodeError:
                    break  # torn tail write from a crash; everything before it stands
        return events

    def sink(self):
        """Adapter usable as a pipeline event sink."""
        return self.append
