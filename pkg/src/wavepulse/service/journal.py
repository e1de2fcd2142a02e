"""Append-only pipeline journal; recovery replays it to resume work."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

STAGES = ("recorded", "transcribed", "labeled", "split", "summarized", "embedded")
QUARANTINED = "quarantined"


@dataclass
class ChunkState:
    """What the journal says about one chunk."""

    done: set[str] = field(default_factory=set)
    failures: dict[str, int] = field(default_factory=dict)
    quarantined: bool = False

    @property
    def stage(self) -> str:
        if self.quarantined:
            return "failed"
        for stage in reversed(STAGES):
            if stage in self.done:
                return stage
        return "new"

    def attempts(self, stage: str) -> int:
        return self.failures.get(stage, 0)


class Journal:
    """Newline-JSON log of stage completions and failures.

    Appends are atomic at the line level and guarded by a lock; this is the
    single serialization point shared by pipeline workers.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._repair_torn_tail()

    def _repair_torn_tail(self) -> None:
        # a crash mid-append can leave a line without its newline; terminate it
        # so the next append starts fresh (replay skips the malformed line)
        if not self.path.exists() or self.path.stat().st_size == 0:
            return
        with self.path.open("rb+") as fh:
            fh.seek(-1, 2)
            if fh.read(1) != b"\n":
                fh.write(b"\n")

    def record(self, chunk: str, stage: str, status: str, **extra) -> None:
        entry = {
            "chunk": chunk,
            "stage": stage,
            "status": status,
            "ts": datetime.now(tz=timezone.utc).isoformat(),
        }
        entry.update(extra)
        line = json.dumps(entry, sort_keys=True)
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()

    def read_lines(self) -> list[str]:
        if not self.path.exists():
            return []
        return [l for l in self.path.read_text(encoding="utf-8").splitlines() if l.strip()]

    def replay(self) -> dict[str, ChunkState]:
        """Fold the log into per-chunk state; malformed tail lines are skipped."""
        states: dict[str, ChunkState] = {}
        if not self.path.exists():
            return states
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    continue  # torn write at crash; later entries rewrite state
                state = states.setdefault(entry["chunk"], ChunkState())
                stage, status = entry["stage"], entry["status"]
                if status == "done":
                    state.done.add(stage)
                elif status == "failed":
                    state.failures[stage] = state.failures.get(stage, 0) + 1
                elif status == QUARANTINED:
                    state.quarantined = True
        return states

    def stage_counters(self) -> dict[str, int]:
        """How many chunks sit at each stage right now."""
        counters = {stage: 0 for stage in STAGES}
        counters["failed"] = 0
        for state in self.replay().values():
            stage = state.stage
            if stage != "new":
                counters[stage] += 1
        return counters
