"""Append-only workshop event log with deterministic replay.

One JSON object per line, UTF-8, gap-free sequence numbers from 1. The
first event of a workshop is always ``setup`` carrying the full
configuration; replaying events 1..n through a fresh engine reproduces
the exact runtime state after event n (timestamps are informational and
take no part in replay).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .config import parse_config
from .errors import EngineError
from .workshop import WorkshopEngine

EPOCH_TS = "1970-01-01T00:00:00+00:00"


class CorruptLog(EngineError):
    def __init__(self, seq: int, message: str = ""):
        super().__init__(message or f"event log corrupt at seq {seq}", seq=seq)
        self.seq = seq


class StorageError(EngineError):
    pass


@dataclass(frozen=True)
class WorkshopEvent:
    seq: int
    ts: str
    agent: str
    type: str
    payload: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "ts": self.ts, "agent": self.agent,
                "type": self.type, "payload": self.payload}


class EventLog:
    """File-backed append-only log; appends are flushed and fsynced
    before returning so an acknowledged event survives a crash."""

    def __init__(self, path: str | Path, deterministic_ts: bool = False):
        self.path = Path(path)
        self.deterministic_ts = deterministic_ts
        self._next_seq = len(self.read_lines()) + 1

    def read_lines(self) -> list[str]:
        if not self.path.exists():
            return []
        return [ln for ln in self.path.read_text(encoding="utf-8").splitlines() if ln.strip()]

    def events(self) -> list[WorkshopEvent]:
        events = []
        for i, line in enumerate(self.read_lines(), start=1):
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorruptLog(i, f"undecodable event at line {i}: {exc}") from exc
            events.append(WorkshopEvent(
                seq=int(data.get("seq", 0)), ts=str(data.get("ts", "")),
                agent=str(data.get("agent", "")), type=str(data.get("type", "")),
                payload=data.get("payload") or {},
            ))
        _check_sequence(events)
        return events

    def append(self, event_type: str, agent: str, payload: dict) -> WorkshopEvent:
        """Durably append one validated event; returns it with its seq."""
        ts = EPOCH_TS if self.deterministic_ts else datetime.now(timezone.utc).isoformat()
        event = WorkshopEvent(seq=self._next_seq, ts=ts, agent=agent,
                              type=event_type, payload=payload)
        line = json.dumps(event.to_dict(), sort_keys=True, ensure_ascii=False)
        try:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StorageError(f"cannot append to {self.path}: {exc}") from exc
        self._next_seq += 1
        return event


def _check_sequence(events: list[WorkshopEvent]) -> None:
    for i, event in enumerate(events, start=1):
        if event.seq != i:
            raise CorruptLog(i, f"expected seq {i}, found {event.seq}")


def append_event(log: EventLog, event_type: str, agent: str, payload: dict) -> int:
    """Append one event; returns its persisted sequence number."""
    return log.append(event_type, agent, payload).seq


def replay_events(events: list[WorkshopEvent] | list[dict]) -> WorkshopEngine | None:
    """Rebuild the runtime by re-applying events in order.

    An empty log replays to the unconfigured (setup-phase) state, i.e.
    ``None``. The first event must be ``setup``; its payload carries the
    configuration from which the engine is rebuilt deterministically.
    """
    normalized: list[WorkshopEvent] = []
    for i, event in enumerate(events, start=1):
        if isinstance(event, dict):
            normalized.append(WorkshopEvent(
                seq=int(event.get("seq", 0)), ts=str(event.get("ts", "")),
                agent=str(event.get("agent", "")), type=str(event.get("type", "")),
                payload=event.get("payload") or {},
            ))
        else:
            normalized.append(event)
    _check_sequence(normalized)
    if not normalized:
        return None
    first = normalized[0]
    if first.type != "setup" or "config" not in first.payload:
        raise CorruptLog(1, "first event must be a setup event")
    engine = WorkshopEngine(parse_config(first.payload["config"]))
    for event in normalized[1:]:
        engine.apply(event.type, event.payload)
    return engine


def replay(log: EventLog) -> WorkshopEngine | None:
    """Replay a whole log file; idempotent."""
    return replay_events(log.events())
